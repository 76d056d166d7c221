#pragma once

#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "arith.hpp"
#include "classnumbers.hpp"
#include "constants.hpp"
#include "density.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace murmur {

struct TraceParams {
    u64 N = 1;
    u64 P = 3;
    int k = 2;

    void validate() const
    {
        if (N == 0) throw std::domain_error("level must be positive");
        for (auto [p, e] : trial_factor(N))
            if (e > 1) throw std::domain_error("level must be square-free");
        if (P <= 2 || !is_prime_u64(P)) throw std::domain_error("P must be an odd prime");
        if (N % P == 0) throw std::domain_error("P must not divide N");
        if (k < 2 || k % 2) throw std::domain_error("weight k must be even and >= 2");
        if (N > (u64(1) << 62) / (4 * P)) throw std::overflow_error("4PN out of range");
    }
};

// Dense table where it covers d, direct evaluation with a memo elsewhere.
class CachedHurwitz {
public:
    CachedHurwitz() = default;
    explicit CachedHurwitz(HurwitzTable t) : table_(std::move(t)) {}

    Rational operator()(u64 d) const
    {
        if (table_ && table_->covers(d)) return table_->at(d);
        {
            std::lock_guard lock(m_);
            if (auto it = memo_.find(d); it != memo_.end()) return it->second;
        }
        Rational v = hurwitz_H1(d);
        std::lock_guard lock(m_);
        memo_.emplace(d, v);
        return v;
    }
    bool has_table() const { return table_.has_value(); }

private:
    std::optional<HurwitzTable> table_;
    mutable std::mutex m_;
    mutable std::unordered_map<u64, Rational> memo_;
};

namespace detail {

inline double weight_factor(int k, u64 r, u64 N, u64 P)
{
    return chebyshev_U(k - 2, double(r) * std::sqrt(double(N)) / (2 * std::sqrt(double(P))));
}

}  // namespace detail

// Trace of T_P W_N on S_2^new(N), normalized as sum_f sqrt(P) lambda_f(P) eps(f):
// H_1(-4PN)/2 + sum_{r >= 1, r^2 N < 4P} H_1(-(4PN - r^2 N^2)) - (P + 1).
template <class H>
Rational trace_TpWN_exact(const TraceParams& p, const H& hurwitz)
{
    p.validate();
    if (p.k != 2) throw std::domain_error("exact trace is for k = 2");
    const u64 N = p.N, P = p.P;
    Rational t = hurwitz(4 * P * N) / Rational(2);
    for (u64 r = 1; r * r * N < 4 * P; ++r) t += hurwitz(4 * P * N - r * r * N * N);
    return t - Rational(i64(P + 1));
}

// Any even k: same sum with U_{k-2}(r sqrt(N)/(2 sqrt(P))) inside the r-sum and the
// sign (-1)^{k/2-1}; k = 2 goes through the exact route.
template <class H>
double trace_TpWN(const TraceParams& p, const H& hurwitz)
{
    if (p.k == 2) return trace_TpWN_exact(p, hurwitz).to_double();
    p.validate();
    const u64 N = p.N, P = p.P;
    CompensatedSum s;
    s.add(0.5 * hurwitz(4 * P * N).to_double() * detail::weight_factor(p.k, 0, N, P));
    for (u64 r = 1; r * r * N < 4 * P; ++r)
        s.add(detail::weight_factor(p.k, r, N, P) * hurwitz(4 * P * N - r * r * N * N).to_double());
    return detail::weight_sign(p.k) * s.value();
}

// Second route through primitive class numbers:
// h(-4PN)/2 + h(-PN)/2 + sum_r sum_{d^2 | 4P - r^2 N} h(-N(4P - r^2 N)/d^2) - (P + 1),
// with the 1/2, 1/3 weights at -4, -3 and h = 0 off discriminants. h covers [0, 4PN].
inline Rational trace_TpWN_via_h(const TraceParams& p, const std::vector<u64>& h)
{
    p.validate();
    if (p.k != 2) throw std::domain_error("h-route trace is for k = 2");
    const u64 N = p.N, P = p.P;
    if (h.size() <= 4 * P * N) throw std::length_error("primitive class-number table too short");
    auto hw = [&](u64 d) { return (d % 4 == 0 || d % 4 == 3) ? weighted_h(d, h[d]) : Rational(0); };
    Rational t = hw(4 * P * N) / Rational(2);
    if ((P * N) % 4 == 3) t += hw(P * N) / Rational(2);
    for (u64 r = 1; r * r * N < 4 * P; ++r) {
        const u64 m = 4 * P - r * r * N;
        for (u64 d = 1; d * d <= m; ++d)
            if (m % (d * d) == 0) t += hw(N * m / (d * d));
    }
    return t - Rational(i64(P + 1));
}

// dim S^new(N, k) main term (k-1) phi(N)/12.
inline Rational dimension_main(u64 N, int k)
{
    if (N == 0) throw std::domain_error("level must be positive");
    if (k < 2 || k % 2) throw std::domain_error("weight k must be even and >= 2");
    u64 phi = N;
    for (auto [p, e] : trial_factor(N)) phi = phi / p * (p - 1);
    return Rational(i64(k - 1)) * Rational(i64(phi), 12);
}

struct TraceReport {
    u64 N_low = 0, N_high = 0;
    u64 P = 0;
    int k = 2;
    double numerator = 0;
    double denominator = 0;
    double average = 0;
    double predicted = 0;
    double residual = 0;
    // M_k(P/N) averaged with the same dimension weights as the levels; tracks the
    // drift of P/N across a window that is not short relative to X.
    double predicted_window = 0;
    double residual_window = 0;
    u64 levels = 0;
    bool empty = true;  // no square-free level in range
};

namespace detail {

template <class H>
TraceReport level_average(u64 lo, u64 hi, u64 P, int k, const H& hurwitz, unsigned threads, u64 pmax)
{
    if (P <= 2 || !is_prime_u64(P)) throw std::domain_error("P must be an odd prime");
    if (lo == 0 || hi < lo) throw std::domain_error("level range must be nonempty and positive");
    const u64 n = hi - lo + 1;
    std::vector<double> tr(n, 0), dim(n, 0), pred(n, 0);
    DensityConfig cfg;
    cfg.k = k;
    cfg.pmax = pmax;
    std::vector<char> used(n, 0);
    parallel_for(
        n,
        [&](std::size_t i) {
            const u64 N = lo + i;
            if (N % P == 0) return;
            for (auto [p, e] : trial_factor(N))
                if (e > 1) return;
            tr[i] = trace_TpWN(TraceParams{N, P, k}, hurwitz);
            dim[i] = dimension_main(N, k).to_double();
            pred[i] = dim[i] * murmuration_density(cfg, double(P) / double(N));
            used[i] = 1;
        },
        threads);
    TraceReport rep;
    rep.N_low = lo;
    rep.N_high = hi;
    rep.P = P;
    rep.k = k;
    CompensatedSum a, b, c;
    for (u64 i = 0; i < n; ++i) {
        if (!used[i]) continue;
        a.add(tr[i]);
        b.add(dim[i]);
        c.add(pred[i]);
        ++rep.levels;
    }
    rep.numerator = a.value();
    rep.denominator = b.value();
    rep.empty = rep.levels == 0;
    rep.average = rep.empty ? 0 : rep.numerator / rep.denominator;
    rep.predicted_window = rep.empty ? 0 : c.value() / rep.denominator;
    rep.residual_window = rep.empty ? 0 : rep.average - rep.predicted_window;
    return rep;
}

}  // namespace detail

// Square-free N in [X, X+Y], P not dividing N; predicted M_k(P/X).
template <class H>
TraceReport interval_average(u64 X, u64 Y, u64 P, int k, const H& hurwitz, unsigned threads = 0,
                             u64 pmax = default_pmax)
{
    if (Y >= X) throw std::domain_error("interval average needs Y < X");
    auto rep = detail::level_average(X, X + Y, P, k, hurwitz, threads, pmax);
    DensityConfig cfg;
    cfg.k = k;
    cfg.pmax = pmax;
    rep.predicted = murmuration_density(cfg, double(P) / double(X));
    rep.residual = rep.empty ? 0 : rep.average - rep.predicted;
    return rep;
}

// Square-free N in [X, cX]; predicted dyadic_density(k, c, P/X).
template <class H>
TraceReport dyadic_average(u64 X, double c, u64 P, int k, const H& hurwitz, unsigned threads = 0,
                           u64 pmax = default_pmax)
{
    if (!(c > 1)) throw std::domain_error("dyadic window needs c > 1");
    auto rep = detail::level_average(X, u64(std::floor(c * double(X))), P, k, hurwitz, threads, pmax);
    DensityConfig cfg;
    cfg.k = k;
    cfg.pmax = pmax;
    rep.predicted = dyadic_density(cfg, c, double(P) / double(X));
    rep.residual = rep.empty ? 0 : rep.average - rep.predicted;
    return rep;
}

}  // namespace murmur

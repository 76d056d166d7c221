#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "constants.hpp"
#include "density.hpp"
#include "multfns.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace murmur {

inline const std::vector<u64>& reference_truncation_set()
{
    static const std::vector<u64> D{1,  2,  3,  5,  6,  7,  10, 11, 13, 14, 15, 21, 22,
                                    26, 30, 33, 35, 39, 42, 55, 65, 66, 70, 77, 78};
    return D;
}

inline constexpr double reported_sqrtQ_sum = 3.0907;
inline constexpr double reported_budget = 0.6306;

struct SignCheckConfig {
    std::vector<u64> D = reference_truncation_set();
    u64 S = 1000000;
    std::vector<double> offsets{0.0, 0.5, 0.162};
    std::vector<int> expected_signs{-1, -1, +1};  // empty: take the sign at k = 1
    double threshold_margin = 1e-9;               // float slack on top of budget and inner tails
    double full_sum_upper = 0;                    // 0: max(3.0907, certified own bound)
    unsigned threads = 0;

    void validate() const
    {
        if (D.empty()) throw std::domain_error("truncation set must be nonempty");
        for (u64 d : D) {
            if (d == 0) throw std::domain_error("truncation set entries must be positive");
            for (auto [p, e] : trial_factor(d))
                if (e > 1) throw std::domain_error("truncation set entries must be square-free");
        }
        if (S < 1) throw std::domain_error("S must be >= 1");
        for (double o : offsets)
            if (!(o >= 0 && o < 1)) throw std::domain_error("offsets must lie in [0, 1)");
        if (!expected_signs.empty() && expected_signs.size() != offsets.size())
            throw std::domain_error("one expected sign per offset");
    }
};

struct SeriesValue {
    double value = 0;
    double tail = 0;
};

// f(x) = sum_s cos(4 pi x s - 3pi/4) s^{-3/2} summed to S. Tail by summation by parts,
// |sum_{s>S}| <= (S+1)^{-3/2}/|sin 2 pi x|, and never worse than 2/sqrt(S). When 2x is an
// integer every term is -cos(pi/4) s^{-3/2} and the tail is summed exactly.
inline SeriesValue f_polylog(double x, u64 S)
{
    if (S < 1) throw std::domain_error("S must be >= 1");
    const double two_x = 2 * x;
    if (two_x == std::round(two_x)) {
        return {-f_max(), 0.0};
    }
    const double theta = 4 * std::numbers::pi * x;
    const std::complex<double> step = std::polar(1.0, theta);
    std::complex<double> z = std::polar(1.0, theta - 0.75 * std::numbers::pi);
    CompensatedSum s;
    for (u64 i = 1; i <= S; ++i) {
        s.add(z.real() / (double(i) * std::sqrt(double(i))));
        z *= step;
        if (i % 1024 == 0) z /= std::abs(z);
    }
    const double sn = std::abs(std::sin(2 * std::numbers::pi * x));
    const double S1 = double(S) + 1;
    double tail = 2 / std::sqrt(double(S));
    if (sn > 0) tail = std::min(tail, std::pow(S1, -1.5) / sn);
    // rotation roundoff over S steps
    tail += 1e-15 * double(S) * 2.7;
    return {s.value(), tail};
}

// Half the least common multiple of D.
inline Rational period(const std::vector<u64>& D)
{
    if (D.empty()) throw std::domain_error("period of an empty set");
    u64 l = 1;
    for (u64 d : D) {
        if (d == 0) throw std::domain_error("period needs positive entries");
        const u64 g = std::gcd(l, d);
        if (l / g > std::numeric_limits<i64>::max() / d) throw std::overflow_error("lcm overflow");
        l = l / g * d;
    }
    return Rational(i64(l), 2);
}

inline double sqrtQ_partial(const std::vector<u64>& D)
{
    CompensatedSum s;
    for (u64 d : D) s.add(Q_value(d) * std::sqrt(double(d)));
    return s.value();
}

// Upper bound on sum_d Q(d) sqrt(d) from the Euler product over p <= pmax plus its tail.
inline double certified_sqrtQ_upper(u64 pmax = 100000000)
{
    auto v = sqrtQ_product(pmax);
    return v.value + v.tail_bound;
}

// (U - sum_{d in D} Q(d) sqrt d) * M_max
inline double error_budget(const std::vector<u64>& D, double full_sum_upper)
{
    const double diff = full_sum_upper - sqrtQ_partial(D);
    if (diff < 0) throw std::domain_error("upper bound lies below the partial sum");
    return diff * f_max();
}

// sum_{d in D} Q(d) sqrt(d) f(T/d)
inline SeriesValue M_D(double T, const std::vector<u64>& D, u64 S)
{
    CompensatedSum v;
    double tail = 0;
    for (u64 d : D) {
        const double w = Q_value(d) * std::sqrt(double(d));
        auto f = f_polylog(T / double(d), S);
        v.add(w * f.value);
        tail += w * f.tail;
    }
    return {v.value(), tail};
}

struct OffsetVerdict {
    double offset = 0;
    int sign = 0;                // claimed sign of M_D at k + offset
    double worst_margin = 0;     // min over k of sign*M_D - (budget + inner tail + slack)
    u64 worst_k = 0;
    u64 failures = 0;
    bool pass = false;
};

struct SignCheckCertificate {
    Rational period{0};
    double full_sum_upper = 0;
    double error_budget = 0;
    u64 grid_size = 0;
    std::vector<OffsetVerdict> offsets;

    bool pass() const
    {
        return std::all_of(offsets.begin(), offsets.end(), [](const OffsetVerdict& v) { return v.pass; });
    }
};

inline double default_full_sum_upper()
{
    static const double u = std::max(reported_sqrtQ_sum, certified_sqrtQ_upper());
    return u;
}

// Scans k = 1..ceil(period) at every offset. f(T/d) depends only on k mod d, so each
// d needs d series evaluations per offset.
inline SignCheckCertificate grid_verify(const SignCheckConfig& cfg)
{
    cfg.validate();
    SignCheckCertificate cert;
    cert.period = period(cfg.D);
    cert.full_sum_upper = cfg.full_sum_upper > 0 ? cfg.full_sum_upper : default_full_sum_upper();
    cert.error_budget = error_budget(cfg.D, cert.full_sum_upper);
    const double per = cert.period.to_double();
    cert.grid_size = std::max<u64>(1, u64(std::ceil(per)));

    std::vector<double> w;
    for (u64 d : cfg.D) w.push_back(Q_value(d) * std::sqrt(double(d)));

    for (std::size_t oi = 0; oi < cfg.offsets.size(); ++oi) {
        const double o = cfg.offsets[oi];
        // cache[j][k mod d]
        std::vector<std::vector<SeriesValue>> cache(cfg.D.size());
        std::vector<std::pair<std::size_t, u64>> jobs;
        for (std::size_t j = 0; j < cfg.D.size(); ++j) {
            cache[j].resize(cfg.D[j]);
            for (u64 r = 0; r < cfg.D[j]; ++r) jobs.emplace_back(j, r);
        }
        parallel_for(
            jobs.size(),
            [&](std::size_t i) {
                auto [j, r] = jobs[i];
                const double d = double(cfg.D[j]);
                // exact resonance test in integers when 2o is an integer
                const double two_o = 2 * o;
                if (two_o == std::round(two_o) && (2 * r + u64(two_o)) % cfg.D[j] == 0)
                    cache[j][r] = {-f_max(), 0.0};
                else
                    cache[j][r] = f_polylog((double(r) + o) / d, cfg.S);
            },
            cfg.threads);

        OffsetVerdict v;
        v.offset = o;
        v.worst_margin = INFINITY;
        auto value_at = [&](u64 k) {
            CompensatedSum s;
            double tail = 0;
            for (std::size_t j = 0; j < cfg.D.size(); ++j) {
                const auto& f = cache[j][k % cfg.D[j]];
                s.add(w[j] * f.value);
                tail += w[j] * f.tail;
            }
            return SeriesValue{s.value(), tail};
        };
        v.sign = cfg.expected_signs.empty() ? (value_at(1).value >= 0 ? 1 : -1) : cfg.expected_signs[oi];
        for (u64 k = 1; k <= cert.grid_size; ++k) {
            auto m = value_at(k);
            const double margin = v.sign * m.value - (cert.error_budget + m.tail + cfg.threshold_margin);
            if (margin <= 0) ++v.failures;
            if (margin < v.worst_margin) {
                v.worst_margin = margin;
                v.worst_k = k;
            }
        }
        v.pass = v.failures == 0;
        cert.offsets.push_back(v);
    }
    return cert;
}

struct SecondPeakReport {
    double lo = 0, hi = 0;
    u64 dmax = 0;
    double max_value = 0;
    double argmax = 0;
    double error_bound = 0;  // f_plus * (U - sum_{d<=dmax} Q(d) sqrt d)
    double f_plus = 0.83;    // upper bound for max f on (0, 1/2)
    bool certified_negative = false;
};

// Dense scan of M_{D'} with D' = {d <= dmax} on [lo, hi], refined around the best grid points.
// Terms use the closed polylog expansion of f.
inline SecondPeakReport second_peak_probe(double lo = 15014.5, double hi = 15015, u64 dmax = 5000,
                                          u64 grid = 4000, double full_sum_upper = 0, unsigned threads = 0)
{
    if (!(hi > lo) || grid < 2 || dmax < 1) throw std::domain_error("bad probe parameters");
    SecondPeakReport rep{lo, hi, dmax};
    std::vector<std::pair<double, double>> dw;  // (d, Q(d) sqrt d)
    CompensatedSum wsum;
    for (u64 d = 1; d <= dmax; ++d) {
        const double q = Q_value(d);
        if (q == 0) continue;
        dw.emplace_back(double(d), q * std::sqrt(double(d)));
        wsum.add(q * std::sqrt(double(d)));
    }
    auto M = [&](double T) {
        CompensatedSum s;
        for (auto [d, w] : dw) s.add(w * polylog_f(T / d));
        return s.value();
    };
    std::vector<double> vals(grid + 1);
    const double h = (hi - lo) / double(grid);
    parallel_for(grid + 1, [&](std::size_t i) { vals[i] = M(lo + h * double(i)); }, threads);
    std::size_t best = std::max_element(vals.begin(), vals.end()) - vals.begin();
    double a = lo + h * (double(best) - 1), b = lo + h * (double(best) + 1);
    a = std::max(a, lo);
    b = std::min(b, hi);
    // golden-section refinement inside the bracketing cells
    const double g = 0.5 * (std::sqrt(5.0) - 1);
    double x1 = b - g * (b - a), x2 = a + g * (b - a), f1 = M(x1), f2 = M(x2);
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = M(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = M(x1);
        }
    }
    rep.max_value = vals[best];
    rep.argmax = lo + h * double(best);
    for (auto [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}})
        if (f > rep.max_value) {
            rep.max_value = f;
            rep.argmax = x;
        }
    const double U = full_sum_upper > 0 ? full_sum_upper : default_full_sum_upper();
    rep.error_bound = rep.f_plus * std::max(0.0, U - wsum.value());
    rep.certified_negative = rep.max_value + rep.error_bound < 0;
    return rep;
}

// Largest value of f on a uniform grid over one period; the 0.83 used above must exceed it.
inline double f_positive_max(u64 grid = 200000)
{
    double m = -INFINITY;
    for (u64 i = 0; i < grid; ++i) m = std::max(m, polylog_f(0.5 * double(i) / double(grid)));
    return m;
}

}  // namespace murmur

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "arith.hpp"
#include "multfns.hpp"
#include "rational.hpp"

namespace murmur {

inline constexpr double pi = std::numbers::pi;
inline constexpr double zeta2 = pi * pi / 6;
inline double zeta3_2() { return boost::math::zeta(1.5); }

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x)
    {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0, c_ = 0;
};

enum class ConstantKind { alpha, beta, gamma, A, B, dimC, Delta };

inline const char* name(ConstantKind k)
{
    switch (k) {
    case ConstantKind::alpha: return "alpha";
    case ConstantKind::beta: return "beta";
    case ConstantKind::gamma: return "gamma";
    case ConstantKind::A: return "A";
    case ConstantKind::B: return "B";
    case ConstantKind::dimC: return "dimC";
    case ConstantKind::Delta: return "Delta";
    }
    return "?";
}

inline ConstantKind constant_kind(const std::string& s)
{
    for (ConstantKind k : {ConstantKind::alpha, ConstantKind::beta, ConstantKind::gamma, ConstantKind::A,
                           ConstantKind::B, ConstantKind::dimC, ConstantKind::Delta})
        if (s == name(k)) return k;
    throw std::invalid_argument("unknown constant kind: " + s);
}

struct EulerProductValue {
    double value = 0;
    u64 pmax = 0;
    double tail_bound = 0;
};

namespace detail {

// log of the local factor at p.
inline double log_factor(ConstantKind k, double p)
{
    const double p2 = p * p, p4 = p2 * p2;
    switch (k) {
    case ConstantKind::alpha: return std::log1p(-(2 * p - 1) / (p4 - 2 * p2 + p));
    case ConstantKind::beta: return std::log1p((p - 1) / (p2 * p + p2 - p));
    case ConstantKind::gamma: return std::log1p(1 / (p2 + p - 1));
    case ConstantKind::A: return std::log1p(p / ((p + 1) * (p + 1) * (p - 1)));
    case ConstantKind::B: return std::log1p(-p / ((p2 - 1) * (p2 - 1)));
    case ConstantKind::dimC: return std::log1p(-1 / (p2 + p));
    case ConstantKind::Delta: return std::log1p((2 * p - 1) / (p4 - 2 * p2 - p + 1));
    }
    return 0;
}

// c with |f(p)| <= c/p^2 for every prime p >= 3, where the factor is 1 + f(p).
inline double tail_constant(ConstantKind k)
{
    switch (k) {
    case ConstantKind::alpha: return 2;
    case ConstantKind::beta: return 1;
    case ConstantKind::gamma: return 1;
    case ConstantKind::A: return 1.5;
    case ConstantKind::B: return 1;
    case ConstantKind::dimC: return 1;
    case ConstantKind::Delta: return 2;
    }
    return 0;
}

inline double leading_scalar(ConstantKind k)
{
    switch (k) {
    case ConstantKind::alpha:
    case ConstantKind::beta: return 2 * pi;
    case ConstantKind::gamma: return 12;
    case ConstantKind::Delta: return 1 / zeta2;
    default: return 1;
    }
}

}  // namespace detail

// Product over primes p <= pmax with a certified bound on the omitted factors:
// |log prod_{p>pmax}(1 + f(p))| <= sum_{n>pmax} 2c/n^2 <= 2c/pmax.
inline EulerProductValue euler_constant(ConstantKind k, u64 pmax)
{
    if (pmax < 2) throw std::domain_error("pmax must be >= 2");
    CompensatedSum s;
    for_each_prime(pmax, [&](u64 p) { s.add(detail::log_factor(k, double(p))); });
    const double v = detail::leading_scalar(k) * std::exp(s.value());
    const double lt = 2 * detail::tail_constant(k) / double(pmax);
    return {v, pmax, std::abs(v) * std::expm1(lt)};
}

// Several constants from one prime sweep.
inline std::vector<EulerProductValue> euler_constants(const std::vector<ConstantKind>& kinds, u64 pmax)
{
    if (pmax < 2) throw std::domain_error("pmax must be >= 2");
    std::vector<CompensatedSum> s(kinds.size());
    for_each_prime(pmax, [&](u64 p) {
        for (std::size_t i = 0; i < kinds.size(); ++i) s[i].add(detail::log_factor(kinds[i], double(p)));
    });
    std::vector<EulerProductValue> out;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        double v = detail::leading_scalar(kinds[i]) * std::exp(s[i].value());
        out.push_back({v, pmax, std::abs(v) * std::expm1(2 * detail::tail_constant(kinds[i]) / double(pmax))});
    }
    return out;
}

// prod_p (1 + Q(p) sqrt p) = sum_d Q(d) sqrt d, over p <= pmax. The factors are
// 1 + O(p^-3/2), so the tail uses pi(t) < 1.25506 t/log t:
// sum_{p>x} p^-3/2 <= 3.765/(sqrt(x) log x), with 1.01 absorbing p^4/(p^4-2p^2-p+1) for p >= 20.
inline EulerProductValue sqrtQ_product(u64 pmax)
{
    if (pmax < 20) throw std::domain_error("pmax must be >= 20");
    CompensatedSum s;
    for_each_prime(pmax, [&](u64 p) { s.add(std::log1p(local_Q(double(p)) * std::sqrt(double(p)))); });
    const double v = std::exp(s.value());
    const double x = double(pmax);
    return {v, pmax, v * std::expm1(1.01 * 3.765 / (std::sqrt(x) * std::log(x)))};
}

// Same product over the first n primes.
inline EulerProductValue sqrtQ_product_first_primes(u64 n)
{
    if (n < 10) throw std::domain_error("need at least 10 primes");
    // p_n < n (log n + log log n) for n >= 6
    const double ln = std::log(double(n));
    const u64 bound = u64(double(n) * (ln + std::log(ln))) + 1;
    CompensatedSum s;
    u64 count = 0, last = 0;
    for_each_prime(bound, [&](u64 p) {
        if (count == n) return;
        s.add(std::log1p(local_Q(double(p)) * std::sqrt(double(p))));
        ++count;
        last = p;
    });
    const double v = std::exp(s.value());
    const double x = double(last);
    return {v, last, v * std::expm1(1.01 * 3.765 / (std::sqrt(x) * std::log(x)))};
}

struct QPartialSums {
    u64 T = 0;
    double sum_Q = 0;          // sum_{d<=T} Q(d)
    double sum_Q_over_d = 0;   // sum_{d<=T} Q(d)/d
    double sum_Q_sqrt_d = 0;   // sum_{d<=T} Q(d) sqrt(d)
};

inline QPartialSums q_partial_sums(u64 T)
{
    if (T == 0) throw std::domain_error("T must be positive");
    QPartialSums out{T};
    CompensatedSum a, b, c;
    a.add(1);
    b.add(1);
    c.add(1);
    if (T >= 2) {
        FactorSieve s(std::max<u64>(T, 2));
        for (u64 d = 2; d <= T; ++d) {
            double q = Q_value(s.factor(d));
            if (q == 0) continue;
            a.add(q);
            b.add(q / double(d));
            c.add(q * std::sqrt(double(d)));
        }
    }
    out.sum_Q = a.value();
    out.sum_Q_over_d = b.value();
    out.sum_Q_sqrt_d = c.value();
    return out;
}

inline constexpr u64 qcount_exact_limit = 64;

// Exact sum_{d<=T} Q(d). Denominators outgrow 64 bits by d = 17, hence the bignum rational.
inline boost::multiprecision::cpp_rational qcount_partial_exact(u64 T)
{
    using boost::multiprecision::cpp_rational;
    if (T == 0 || T > qcount_exact_limit) throw std::domain_error("exact Q partial sums need 1 <= T <= 64");
    cpp_rational s(0);
    for (u64 d = 1; d <= T; ++d) {
        cpp_rational q(1);
        bool sf = true;
        for (auto [p, e] : trial_factor(d)) {
            sf = sf && e == 1;
            const i64 x = i64(p);
            q *= cpp_rational(x * x) / cpp_rational(x * x * x * x - 2 * x * x - x + 1);
        }
        if (sf) s += q;
    }
    return s;
}

// sum_{d<=T} Q(d); exact for T <= 64, compensated doubles beyond.
inline double qcount_partial(u64 T)
{
    if (T == 0) throw std::domain_error("T must be positive");
    if (T <= qcount_exact_limit) return qcount_partial_exact(T).convert_to<double>();
    return q_partial_sums(T).sum_Q;
}

// The constants used by the density, bundled from one prime sweep.
struct DensityConstants {
    double alpha, beta, gamma, A, B, dimC, Delta;
    u64 pmax;
    double alpha_tail, beta_tail, gamma_tail;

    static DensityConstants compute(u64 pmax)
    {
        using K = ConstantKind;
        auto v = euler_constants({K::alpha, K::beta, K::gamma, K::A, K::B, K::dimC, K::Delta}, pmax);
        return {v[0].value, v[1].value, v[2].value, v[3].value, v[4].value, v[5].value, v[6].value,
                pmax,       v[0].tail_bound, v[1].tail_bound, v[2].tail_bound};
    }
};

inline constexpr u64 default_pmax = 10000000;

// Process-wide constants at the default cutoff, computed once.
inline const DensityConstants& default_constants()
{
    static const DensityConstants c = DensityConstants::compute(default_pmax);
    return c;
}

}  // namespace murmur

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "arith.hpp"
#include "constants.hpp"
#include "multfns.hpp"
#include "quadrature.hpp"

namespace murmur {

struct DensityConfig {
    int k = 2;
    u64 dmax = 1;       // d summed term by term at least up to here
    u64 smax = 1;       // s summed term by term at least up to here
    u64 pmax = default_pmax;
    double quad_tol = 1e-11;
    double required_accuracy = 0;  // 0 disables the tail-budget check

    void validate() const
    {
        if (k < 2 || k % 2) throw std::domain_error("weight k must be even and >= 2");
        if (dmax < 1 || smax < 1) throw std::domain_error("dmax and smax must be >= 1");
        if (!(quad_tol > 0)) throw std::domain_error("quad_tol must be positive");
        if (pmax < 2) throw std::domain_error("pmax must be >= 2");
    }
};

struct DensityValue {
    double value = 0;
    double tail_bound = 0;       // series truncation and quadrature
    double constants_bound = 0;  // Euler-product truncation of alpha, beta, gamma
};

// Constants for a given prime cutoff, computed once per cutoff.
inline const DensityConstants& constants_for(u64 pmax)
{
    static std::mutex m;
    static std::map<u64, std::unique_ptr<DensityConstants>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[pmax];
    if (!slot) slot = std::make_unique<DensityConstants>(DensityConstants::compute(pmax));
    return *slot;
}

inline double chebyshev_U(unsigned n, double x)
{
    x = std::clamp(x, -1.0, 1.0);
    if (n == 0) return 1;
    double u0 = 1, u1 = 2 * x;
    for (unsigned i = 1; i < n; ++i) {
        double u2 = 2 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

namespace detail {

// Hankel coefficient a_j(n) = prod_{i<=j} (4n^2 - (2i-1)^2) / (j! 8^j).
inline double hankel_coeff(int n, int j)
{
    const double mu = 4.0 * n * n;
    double a = 1;
    for (int i = 1; i <= j; ++i) a *= (mu - double(2 * i - 1) * (2 * i - 1)) / (8.0 * i);
    return a;
}

inline double bessel_hankel(int n, double x)
{
    double P = 0, Q = 0, prev = INFINITY;
    for (int j = 0; j < 200; ++j) {
        double t = hankel_coeff(n, j) / std::pow(x, j);
        if (std::abs(t) > prev) break;
        prev = std::abs(t);
        double sgn = ((j / 2) % 2) ? -1 : 1;
        if (j % 2 == 0)
            P += sgn * t;
        else
            Q += sgn * t;
        if (prev < 1e-17 * (std::abs(P) + std::abs(Q))) break;
    }
    const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
    return std::sqrt(2 / (std::numbers::pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

inline double bessel_series(int n, double x)
{
    const double q = -0.25 * x * x;
    double t = std::exp(n * std::log(0.5 * x) - std::lgamma(n + 1.0));
    double s = t;
    for (int i = 1; i < 500; ++i) {
        t *= q / (double(i) * (n + i));
        s += t;
        if (std::abs(t) < 1e-17 * std::abs(s)) break;
    }
    return s;
}

// Backward recurrence from well above max(n, x), normalized by J_0 + 2 sum J_2k = 1.
inline double bessel_miller(int n, double x)
{
    const double big = std::max<double>(n, x);
    int m = int(big + 20 + 2 * std::sqrt(40 * big));
    m += m % 2;
    double bjp = 0, bj = 1, sum = 0, ans = 0;
    bool add = false;
    const double tox = 2 / x;
    for (int j = m; j > 0; --j) {
        double bjm = j * tox * bj - bjp;
        bjp = bj;
        bj = bjm;
        if (std::abs(bj) > 1e250) {
            bj *= 1e-250;
            bjp *= 1e-250;
            ans *= 1e-250;
            sum *= 1e-250;
        }
        if (add) sum += bj;
        add = !add;
        if (j == n) ans = bjp;
    }
    if (n == 0) ans = bj;
    return ans / (2 * sum - bj);
}

}  // namespace detail

inline double bessel_J(int n, double x)
{
    if (n < 0) throw std::domain_error("bessel_J: negative order");
    if (x < 0) throw std::domain_error("bessel_J: negative argument");
    if (x == 0) return n == 0 ? 1 : 0;
    if (x >= std::max(30.0, double(n) * n)) return detail::bessel_hankel(n, x);
    if (x < 1 || x * x < 4.0 * (n + 1)) return detail::bessel_series(n, x);
    return detail::bessel_miller(n, x);
}

namespace detail {

// nu(r) for r <= rmax, shared and grown on demand.
inline std::shared_ptr<const std::vector<double>> nu_table(u64 rmax)
{
    static std::mutex m;
    static std::shared_ptr<const std::vector<double>> table = std::make_shared<std::vector<double>>(1, 0.0);
    std::lock_guard lock(m);
    if (table->size() <= rmax) {
        auto t = std::make_shared<std::vector<double>>(*table);
        const u64 top = std::max<u64>(rmax, 2 * table->size());
        for (u64 r = t->size(); r <= top; ++r) t->push_back(nu(r));
        table = std::move(t);
    }
    return table;
}

inline double weight_sign(int k) { return (k / 2 - 1) % 2 ? -1.0 : 1.0; }

// Q(d) for d <= dmax, shared and grown on demand.
struct QTable {
    std::vector<double> q;
};

inline std::shared_ptr<const QTable> q_table(u64 dmax)
{
    static std::mutex m;
    static std::shared_ptr<const QTable> table = std::make_shared<QTable>(QTable{{0.0}});
    std::lock_guard lock(m);
    if (table->q.size() <= dmax) {
        auto t = std::make_shared<QTable>(*table);
        const u64 top = std::max<u64>(dmax, 2 * t->q.size());
        for (u64 d = t->q.size(); d <= top; ++d) t->q.push_back(Q_value(d));
        table = std::move(t);
    }
    return table;
}

}  // namespace detail

// Chebyshev form:
// M_k(y) = (alpha (-1)^{k/2-1}/(k-1)) sum_{r < 2 sqrt y} nu(r) sqrt(4y - r^2) U_{k-2}(r/(2 sqrt y))
//          + beta sqrt(y)/(k-1) - gamma delta_{k=2} y
inline double murmuration_density(const DensityConfig& cfg, double y)
{
    cfg.validate();
    if (!(y > 0)) throw std::domain_error("density needs y > 0");
    const auto& c = constants_for(cfg.pmax);
    const double sy = std::sqrt(y), k1 = cfg.k - 1;
    const u64 rmax = u64(2 * sy);
    auto nu_t = detail::nu_table(rmax);
    CompensatedSum s;
    for (u64 r = 1; r <= rmax; ++r) {
        const double w = 4 * y - double(r) * r;
        if (w <= 0) break;
        s.add((*nu_t)[r] * std::sqrt(w) * chebyshev_U(cfg.k - 2, r / (2 * sy)));
    }
    double v = c.alpha * detail::weight_sign(cfg.k) / k1 * s.value() + c.beta * sy / k1;
    if (cfg.k == 2) v -= c.gamma * y;
    return v;
}

namespace detail {

// sum_{s > S} e^{isx} s^{-a} = (2/Gamma(a)) int_0^inf u^{2a-1} e^{(S+1)(ix-u^2)} / (1 - e^{ix-u^2}) du,
// the Mellin integral of the Lerch tail after t = u^2. Smooth at u = 0 even when x is a
// multiple of 2 pi, which is where direct summation converges slowest.
inline QuadResult<std::complex<double>> lerch_tail(double a, double x, u64 S, double tol)
{
    const double xr = std::remainder(x, 2 * std::numbers::pi);
    const double S1 = double(S) + 1;
    const std::complex<double> ph = std::polar(1.0, std::remainder(S1 * xr, 2 * std::numbers::pi));
    auto f = [&](double u) {
        const double t = u * u;
        // 1 - e^{ix - t} without cancellation near x = 0 mod 2 pi
        const double em = std::expm1(-t), cr = std::cos(xr), sr = std::sin(xr);
        const double h = std::sin(0.5 * xr);
        const std::complex<double> den(-(em * cr - 2 * h * h), -(em + 1) * sr);
        return std::pow(u, 2 * a - 1) * std::exp(-S1 * t) * ph / den;
    };
    const double U = std::sqrt(60 / S1);
    auto r = integrate(f, 0.0, U, tol * 1e-2, 1e-14);
    const double g = 2 / std::tgamma(a);
    return {r.value * g, r.error * g + std::exp(-60.0)};
}

inline constexpr int hankel_orders = 10;

// sum_{s>=1} J_n(s x)/s by direct summation to S, then the Hankel expansion in s
// with each power summed through lerch_tail.
inline DensityValue bessel_s_sum(int n, double x, u64 smin, double tol)
{
    const double mu = 4.0 * n * n;
    const double zthr = std::max(100.0, 2 * mu);
    const u64 S = std::max<u64>(smin, u64(std::ceil(zthr / x)));
    CompensatedSum s;
    for (u64 i = 1; i <= S; ++i) s.add(bessel_J(n, double(i) * x) / double(i));
    const std::complex<double> rot = std::polar(1.0, -(0.5 * n + 0.25) * std::numbers::pi);
    const double pre = std::sqrt(2 / (std::numbers::pi * x));
    double err = 0;
    for (int j = 0; j < hankel_orders; ++j) {
        const double cj = hankel_coeff(n, j) / std::pow(x, j);
        if (cj == 0) continue;
        auto L = lerch_tail(1.5 + j, x, S, tol);
        const std::complex<double> z = rot * L.value;
        const double sgn = ((j / 2) % 2) ? -1 : 1;
        s.add(j % 2 == 0 ? pre * sgn * cj * z.real() : -pre * sgn * cj * z.imag());
        err += pre * std::abs(cj) * L.error;
    }
    // First omitted order, doubled, summed with sum_{s>S} s^-b <= S^{1-b}/(b-1).
    const int J = hankel_orders;
    const double b = 1.5 + J;
    err += 2 * pre * std::abs(hankel_coeff(n, J)) / std::pow(x, J) * std::pow(double(S), 1 - b) / (b - 1);
    return {s.value(), err};
}

inline double rel_tail(double v, double t) { return v != 0 ? t / std::abs(v) : 0; }

}  // namespace detail

// Bessel form alpha sqrt(y) sum_d Q(d) sum_s J_{k-1}(4 pi s sqrt(y)/d)/s.
// For d > 2 sqrt(y) the inner sum is exactly 1/(k-1) - delta_{k=2} pi sqrt(y)/d, so those d
// are summed in closed form through sum Q(d) = beta/alpha and sum Q(d)/d = gamma/(pi alpha).
// The remaining d are summed term by term, each with the Hankel/Lerch tail in s.
inline DensityValue murmuration_density_bessel(const DensityConfig& cfg, double y)
{
    cfg.validate();
    if (!(y > 0)) throw std::domain_error("density needs y > 0");
    const auto& c = constants_for(cfg.pmax);
    const int n = cfg.k - 1;
    const double sy = std::sqrt(y);
    const u64 D = std::max<u64>(cfg.dmax, u64(2 * sy));
    auto qt = detail::q_table(D);
    CompensatedSum direct, q0, q1;
    double err = 0;
    for (u64 d = 1; d <= D; ++d) {
        const double q = qt->q[d];
        if (q == 0) continue;
        q0.add(q);
        q1.add(q / double(d));
        const double x = 4 * std::numbers::pi * sy / double(d);
        DensityValue inner;
        if (x <= 2 * std::numbers::pi)
            inner = {1.0 / n - (n == 1 ? x / 4 : 0.0), 0.0};
        else
            inner = detail::bessel_s_sum(n, x, cfg.smax, cfg.quad_tol);
        direct.add(q * inner.value);
        err += q * inner.tail_bound;
    }
    const double L = c.beta / c.alpha, G = c.gamma / (std::numbers::pi * c.alpha);
    const double ra = detail::rel_tail(c.alpha, c.alpha_tail);
    const double eL = L * (ra + detail::rel_tail(c.beta, c.beta_tail));
    const double eG = G * (ra + detail::rel_tail(c.gamma, c.gamma_tail));
    direct.add((L - q0.value()) / n);
    if (n == 1) direct.add(-std::numbers::pi * sy * (G - q1.value()));
    const double inner = direct.value();
    const double ce = c.alpha * sy * (eL / n + (n == 1 ? std::numbers::pi * sy * eG : 0.0)) +
                      c.alpha_tail * sy * std::abs(inner);
    DensityValue out{c.alpha * sy * inner, c.alpha * sy * err, ce};
    if (cfg.required_accuracy > 0 && out.tail_bound > cfg.required_accuracy)
        throw std::runtime_error("Bessel-form tail budget exceeds the requested accuracy");
    return out;
}

// f(x) = sum_s cos(4 pi x s - 3pi/4) s^{-3/2} = Re(e^{-3 pi i/4} Li_{3/2}(e^{i theta})), theta = 4 pi x,
// from the expansion Li_s(e^mu) = Gamma(1-s)(-mu)^{s-1} + sum_k zeta(s-k) mu^k/k!, |mu| < 2 pi.
inline double polylog_f(double x)
{
    static const std::vector<double> coef = [] {
        std::vector<double> c;
        double fact = 1;
        for (int k = 0; k < 80; ++k) {
            if (k) fact *= k;
            c.push_back(boost::math::zeta(1.5 - k) / fact);
        }
        return c;
    }();
    const double theta = std::remainder(4 * std::numbers::pi * x, 2 * std::numbers::pi);
    const std::complex<double> mu(0, theta);
    std::complex<double> s = 0, p = 1;
    for (double ck : coef) {
        const std::complex<double> t = ck * p;
        s += t;
        if (std::abs(t) < 1e-18) break;
        p *= mu;
    }
    if (theta != 0) s += -2 * std::sqrt(std::numbers::pi) * std::sqrt(-mu);
    return (std::polar(1.0, -0.75 * std::numbers::pi) * s).real();
}

// M_max = max |f| = (sqrt 2/2) zeta(3/2)
inline double f_max() { return std::sqrt(0.5) * zeta3_2(); }

// Certified upper bound on sum_d Q(d) sqrt(d), from the Euler product at 10^6.
inline double sqrtQ_upper_default()
{
    static const double u = [] {
        auto v = sqrtQ_product(1000000);
        return v.value + v.tail_bound;
    }();
    return u;
}

// sum_{d <= dmax} Q(d) sqrt(d) f(T/d), with the omitted d bounded by
// (sum_d Q(d) sqrt d - partial) * M_max.
inline DensityValue universal_asymptotic(double T, const DensityConfig& cfg)
{
    cfg.validate();
    auto qt = detail::q_table(cfg.dmax);
    CompensatedSum s, w;
    for (u64 d = 1; d <= cfg.dmax; ++d) {
        const double q = qt->q[d];
        if (q == 0) continue;
        const double qs = q * std::sqrt(double(d));
        s.add(qs * polylog_f(T / double(d)));
        w.add(qs);
    }
    return {s.value(), std::max(0.0, sqrtQ_upper_default() - w.value()) * f_max()};
}

// (-1)^{k/2-1} (alpha/(pi sqrt 2)) y^{1/4} times the universal series at T = sqrt(y).
inline DensityValue asymptotic_density(const DensityConfig& cfg, double y)
{
    if (!(y > 0)) throw std::domain_error("density needs y > 0");
    const auto& c = constants_for(cfg.pmax);
    auto u = universal_asymptotic(std::sqrt(y), cfg);
    const double pre = detail::weight_sign(cfg.k) * c.alpha / (std::numbers::pi * std::sqrt(2.0)) * std::pow(y, 0.25);
    return {pre * u.value, std::abs(pre) * u.tail_bound, c.alpha_tail / c.alpha * std::abs(pre * u.value)};
}

namespace detail {

// Points u in (lo, hi) where y/u crosses r^2/4.
inline std::vector<double> kinks(double y, double lo, double hi)
{
    std::vector<double> out;
    for (u64 r = 1;; ++r) {
        const double u = 4 * y / (double(r) * r);
        if (u <= lo) break;
        if (u < hi) out.push_back(u);
    }
    return out;
}

}  // namespace detail

// (2/(c^2-1)) int_1^c u M_k(y/u) du
inline double dyadic_density(const DensityConfig& cfg, double c, double y)
{
    cfg.validate();
    if (!(c > 1)) throw std::domain_error("dyadic window needs c > 1");
    if (!(y > 0)) throw std::domain_error("density needs y > 0");
    auto f = [&](double u) { return u * murmuration_density(cfg, y / u); };
    auto r = integrate(f, 1.0, c, cfg.quad_tol, 1e-13, detail::kinks(y, 1.0, c));
    return 2 / (c * c - 1) * r.value;
}

struct DyadicConstants {
    double a, b, c;
};

// a = (4/9)(2^{3/2} - 1) beta, b = 2 gamma/3, c = 2 alpha/3
inline DyadicConstants dyadic_constants(u64 pmax = default_pmax)
{
    const auto& k = constants_for(pmax);
    return {4.0 / 9 * (std::pow(2.0, 1.5) - 1) * k.beta, 2 * k.gamma / 3, 2 * k.alpha / 3};
}

// Dyadic average at k = 2, window [X, 2X], in closed form on [0, 1].
inline double dyadic_closed_form_k2(double y, u64 pmax = default_pmax)
{
    if (!(y >= 0 && y <= 1)) throw std::domain_error("closed form holds for y in [0, 1]");
    const auto K = dyadic_constants(pmax);
    double v = K.a * std::sqrt(y) - K.b * y;
    if (y <= 0.25) return v;
    const double y2 = y * y;
    const double tail = 2 * y2 * std::asin(1 - 1 / (2 * y)) + (2 * y - 1) * std::sqrt(y - 0.25);
    if (y <= 0.5) return v + K.c * (std::numbers::pi * y2 + tail);
    return v + K.c * (2 * y2 * std::asin(1 / y - 1) + 2 * (1 - y) * std::sqrt(2 * y - 1) + tail);
}

// (int M_k(y/u) phi(u) u du) / (int phi(u) u du) for phi supported in [lo, hi].
inline double smoothed_average(const DensityConfig& cfg, const std::function<double(double)>& phi, double lo,
                               double hi, double y)
{
    cfg.validate();
    if (!(lo > 0 && hi > lo)) throw std::domain_error("weight support must be inside (0, inf)");
    const auto br = detail::kinks(y, lo, hi);
    auto den = integrate([&](double u) { return phi(u) * u; }, lo, hi, cfg.quad_tol, 1e-13);
    if (den.value == 0) throw std::domain_error("weight integrates to zero");
    auto num = integrate([&](double u) { return murmuration_density(cfg, y / u) * phi(u) * u; }, lo, hi,
                         cfg.quad_tol, 1e-12, br, 20000);
    return num.value / den.value;
}

// Sharp window 1_[1,c].
inline double smoothed_average_sharp(const DensityConfig& cfg, double c, double y)
{
    return dyadic_density(cfg, c, y);
}

// int J_K(x)/x^4 dx = sum_t c_t J_t(x)/x^4.
struct BesselAntiderivative {
    int K = 0;
    std::map<int, double> c;

    double combination(double x) const
    {
        double s = 0;
        for (auto [t, ct] : c) s += ct * bessel_J(t, x);
        return s;
    }
    double operator()(double x) const { return combination(x) / (x * x * x * x); }
    // int_0^inf J(x)/x dx, using int_0^inf J_t(x)/x dx = 1/t.
    double integral_over_x() const
    {
        double s = 0;
        for (auto [t, ct] : c) s += ct / t;
        return s;
    }
};

namespace detail {

using BesselTerms = std::map<std::pair<int, int>, double>;  // (index, power of 1/x) -> coefficient

// int J_m/x^n dx with m - n odd and m > n:
// base int J_{n+1}/x^n = -J_n/x^n, step int J_m/x^n = 2(m-1) int J_{m-1}/x^{n+1} - int J_{m-2}/x^n.
inline BesselTerms antiderivative_terms(int m, int n)
{
    if (m == n + 1) return {{{n, n}, -1.0}};
    BesselTerms out = antiderivative_terms(m - 1, n + 1);
    for (auto& [key, v] : out) v *= 2.0 * (m - 1);
    for (auto [key, v] : antiderivative_terms(m - 2, n)) out[key] -= v;
    return out;
}

}  // namespace detail

inline BesselAntiderivative bessel_antiderivative(int K)
{
    if (K < 5) throw std::domain_error("antiderivative needs K >= 5");
    if ((4 + K) % 2 == 0) throw std::domain_error("antiderivative needs K odd");
    auto terms = detail::antiderivative_terms(K, 4);
    // Lower powers via J_t/x = (J_{t-1} + J_{t+1})/(2t) until every term is over x^4.
    for (int pw = K; pw > 4; --pw) {
        detail::BesselTerms next;
        for (auto [key, v] : terms) {
            auto [t, p] = key;
            if (p != pw) {
                next[key] += v;
                continue;
            }
            next[{t - 1, p - 1}] += v / (2.0 * t);
            next[{t + 1, p - 1}] += v / (2.0 * t);
        }
        terms = std::move(next);
    }
    BesselAntiderivative out{K, {}};
    for (auto [key, v] : terms) {
        if (key.second != 4) throw std::logic_error("antiderivative reduction left a higher power");
        if (v != 0) out.c[key.first] += v;
    }
    return out;
}

}  // namespace murmur

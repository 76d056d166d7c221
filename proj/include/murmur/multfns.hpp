#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "rational.hpp"

namespace murmur {

// Residues N mod d^2 (coprime to d) for which d^2 | r^2 N - 4P and
// (r^2 N^2 - 4PN)/d^2 is a discriminant, with N square-free compatible.
struct RemainderSet {
    u64 r = 0, d = 0, P = 0;
    std::vector<u64> residues;
    bool admissible = false;
};

namespace detail {

inline void require_odd_prime(u64 P)
{
    if (P < 3 || !is_prime_u64(P)) throw std::domain_error("P must be an odd prime");
}

// |R_{r,d}| from the case table; depends only on r and d once gcd(d, P) = 1.
inline int residue_count(u64 r, u64 d)
{
    if (r % 2) return (d % 2 && std::gcd(d, r) == 1) ? 1 : 0;
    const u64 l = r / 2;
    if (d % 2) return std::gcd(l, d) == 1 ? 1 : 0;
    const u64 b = d / 2;
    if (std::gcd(l, b) != 1) return 0;
    if (l % 2 && b % 2 == 0) return 2;
    return (l % 2 || b % 2) ? 1 : 0;
}

inline bool residue_admissible_at(u64 N, u64 r, u64 d, u64 P)
{
    const i64 d2 = i64(d * d);
    if (N % 4 == 0) return false;
    for (auto [p, e] : trial_factor(d))
        if (N % (p * p) == 0) return false;
    const i64 t = i64(r * r) * i64(N) - 4 * i64(P);
    if (t % d2) return false;
    const i64 s = i64(N) * (t / d2);
    const i64 s4 = ((s % 4) + 4) % 4;
    return s4 == 0 || s4 == 1;
}

}  // namespace detail

inline RemainderSet remainder_set(u64 r, u64 d, u64 P)
{
    detail::require_odd_prime(P);
    if (r == 0 || d == 0) throw std::domain_error("r, d must be positive");
    if (d * d > 4 * P) throw std::domain_error("remainder_set requires d^2 <= 4P");
    RemainderSet R{r, d, P, {}, false};
    const u64 d2 = d * d;
    if (r % 2) {
        if (d % 2 == 0 || std::gcd(d, r) != 1) return R;
        R.residues.push_back(mulmod(4 * P % d2, powmod(inverse_mod(i64(r), d2), 2, d2), d2));
    } else {
        const u64 l = r / 2;
        if (d % 2) {
            if (std::gcd(l, d) != 1) return R;
            R.residues.push_back(mulmod(P % d2, powmod(inverse_mod(i64(l), d2), 2, d2), d2));
        } else {
            const u64 b = d / 2;
            if (std::gcd(l, b) != 1) return R;
            const bool lo = l % 2, bo = b % 2;
            if (!lo && !bo) return R;
            auto via_l = [&] { return mulmod(P % d2, powmod(inverse_mod(i64(l), d2), 2, d2), d2); };
            auto via_lb = [&] {
                i64 v = i64(l * l) - i64(b * b);
                return mulmod(P % d2, inverse_mod(v, d2), d2);
            };
            if (lo && bo) R.residues.push_back(via_l());
            if (!lo && bo) R.residues.push_back(via_lb());
            if (lo && !bo) {
                R.residues.push_back(via_l());
                R.residues.push_back(via_lb());
            }
        }
    }
    std::sort(R.residues.begin(), R.residues.end());
    R.admissible = !R.residues.empty();
    return R;
}

// Scans every class mod d^2 through its lifts mod 4d^2.
inline RemainderSet remainder_set_bruteforce(u64 r, u64 d, u64 P)
{
    detail::require_odd_prime(P);
    if (r == 0 || d == 0) throw std::domain_error("r, d must be positive");
    RemainderSet R{r, d, P, {}, false};
    const u64 d2 = d * d;
    for (u64 rho = 0; rho < d2; ++rho) {
        for (u64 j = 0; j < 4; ++j) {
            if (detail::residue_admissible_at(rho + j * d2 + 4 * d2, r, d, P)) {
                R.residues.push_back(rho);
                break;
            }
        }
    }
    R.admissible = !R.residues.empty();
    return R;
}

// theta_r(m) = sum_{a mod m} (a/m) ((a r^2 - 4P)/m), summed literally.
inline i64 theta_bruteforce(u64 r, u64 m, u64 P)
{
    if (m == 0) throw std::domain_error("m must be positive");
    i64 s = 0;
    const i64 r2 = i64(r * r);
    for (u64 a = 0; a < m; ++a) {
        int x = kronecker(i64(a), i64(m));
        if (x) s += x * kronecker(i64(a) * r2 - 4 * i64(P), i64(m));
    }
    return s;
}

namespace detail {

// Multiplicative closed form, valid for every m coprime to P. At 2-adic
// valuation 1 or 2 this is the natural extension used by the Theta_r sum.
inline i64 theta_closed(u64 r, const Factorization& fm)
{
    u64 ro = r;
    while (ro % 2 == 0) ro /= 2;
    i64 t = 1;
    for (auto [p, a] : fm) {
        i64 pa1 = 1;
        for (int i = 1; i < a; ++i) pa1 *= i64(p);
        if (p == 2) {
            if (r % 2 == 0) return 0;
            t *= (a % 2 ? -1 : 1) * pa1;
        } else if (ro % p) {
            t *= (a % 2) ? -pa1 : pa1 * i64(p - 2);
        } else {
            if (a % 2) return 0;
            t *= pa1 * i64(p - 1);
        }
    }
    return t;
}

inline bool is_square_fac(const Factorization& f)
{
    return std::all_of(f.begin(), f.end(), [](const PrimePower& pp) { return pp.e % 2 == 0; });
}

inline i64 phi_of(const Factorization& f)
{
    i64 r = 1;
    for (auto [p, e] : f) {
        r *= i64(p - 1);
        for (int i = 1; i < e; ++i) r *= i64(p);
    }
    return r;
}

inline i64 phi_circ_closed(u64 r, u64 d, const Factorization& fg)
{
    if (!is_square_fac(fg)) return 0;
    const i64 ph = phi_of(fg);
    if (d % 2) return ph;
    const bool g_even = !fg.empty() && fg.front().p == 2;
    if (d % 4 == 2) {
        if (!g_even) return ph;
        return r % 4 == 2 ? 0 : 2 * ph;
    }
    return 2 * ph;
}

inline void require_v2_ok(u64 m)
{
    int v = v2(m);
    if (v == 1 || v == 2) throw std::domain_error("2-adic valuation 1 or 2 is outside the definition");
}

inline void require_divides_d_infinity(u64 g, u64 d)
{
    u64 x = g;
    for (auto [p, e] : trial_factor(d))
        while (x % p == 0) x /= p;
    if (x != 1) throw std::domain_error("g must divide a power of d");
}

}  // namespace detail

inline i64 theta(u64 r, u64 m, u64 P)
{
    if (m == 0) throw std::domain_error("m must be positive");
    detail::require_v2_ok(m);
    if (std::gcd(m, P) != 1) return theta_bruteforce(r, m, P);
    return detail::theta_closed(r, trial_factor(m));
}

// phi°_{r,d}(g): sum over a mod d^2 g with a mod d^2 in R_{r,d} of
// (a/g) (((r^2 a - 4P)/d^2)/g).
inline i64 phi_circ_bruteforce(u64 r, u64 d, u64 g, u64 P)
{
    const RemainderSet R = remainder_set_bruteforce(r, d, P);
    const i64 d2 = i64(d * d);
    i64 s = 0;
    for (u64 t : R.residues) {
        for (u64 v = 0; v < g; ++v) {
            i64 a = i64(t) + i64(v) * d2;
            int x = kronecker(a, i64(g));
            if (x) s += x * kronecker((i64(r * r) * a - 4 * i64(P)) / d2, i64(g));
        }
    }
    return s;
}

// Closed form by case on the 2-adic shapes of d, g and r. Non-admissible pairs give 0.
inline i64 phi_circ(u64 r, u64 d, u64 g, u64 P)
{
    if (g == 0) throw std::domain_error("g must be positive");
    detail::require_v2_ok(g);
    detail::require_divides_d_infinity(g, d);
    detail::require_odd_prime(P);
    if (std::gcd(d, P) != 1 || !detail::residue_count(r, d)) return 0;
    return detail::phi_circ_closed(r, d, trial_factor(g));
}

// Left side of the factorization identity: sum over a mod d^2 m with a mod d^2
// in R_{r,d} of (a/m)(((r^2 a - 4P)/d^2)/m). Equals phi°(g) theta_r(m/g) with
// g = gcd(d^infinity, m).
inline i64 weirdsum_bruteforce(u64 r, u64 d, u64 m, u64 P)
{
    const RemainderSet R = remainder_set_bruteforce(r, d, P);
    const i64 d2 = i64(d * d);
    i64 s = 0;
    for (u64 t : R.residues)
        for (u64 v = 0; v < m; ++v) {
            i64 a = i64(t) + i64(v) * d2;
            int x = kronecker(a, i64(m));
            if (x) s += x * kronecker((i64(r * r) * a - 4 * i64(P)) / d2, i64(m));
        }
    return s;
}

// nu(r) = prod_{p | r} (1 + p^2/(p^4 - 2p^2 - p + 1))
inline Rational nu_exact(u64 r)
{
    if (r == 0) throw std::domain_error("nu(0)");
    Rational v(1);
    for (auto [p, e] : trial_factor(r)) {
        i64 q = i64(p);
        v *= Rational(q * q * q * q - q * q - q + 1, q * q * q * q - 2 * q * q - q + 1);
    }
    return v;
}

inline double local_Q(double p) { return p * p / (p * p * p * p - 2 * p * p - p + 1); }

inline double nu(u64 r)
{
    if (r == 0) throw std::domain_error("nu(0)");
    double v = 1;
    for (auto [p, e] : trial_factor(r)) v *= 1 + local_Q(double(p));
    return v;
}

// Q(d) = mu^2(d) prod_{p | d} p^2/(p^4 - 2p^2 - p + 1)
inline Rational Q(u64 d)
{
    if (d == 0) throw std::domain_error("Q(0)");
    Rational v(1);
    for (auto [p, e] : trial_factor(d)) {
        if (e > 1) return Rational(0);
        i64 q = i64(p);
        v *= Rational(q * q, q * q * q * q - 2 * q * q - q + 1);
    }
    return v;
}

inline double Q_value(const Factorization& f)
{
    double v = 1;
    for (auto [p, e] : f) {
        if (e > 1) return 0;
        v *= local_Q(double(p));
    }
    return v;
}

inline double Q_value(u64 d) { return Q_value(trial_factor(d)); }

// Partial sum over (m, d, g) in T_r with d <= Z and m g <= Zp of
// Theta_r(m, d, g) = eta(d^2 m g)/phi(d^2 m g) * theta_r(m) phi°(g)/(m g d).
inline double theta_sum_partial(u64 r, u64 Z, u64 Zp, u64 P)
{
    detail::require_odd_prime(P);
    if (Z == 0 || Zp == 0) throw std::domain_error("cutoffs must be positive");
    // m-side weight theta_r(m)/(m^2 prod_{p|m}(1 - p^-2)), indexed by m.
    std::vector<double> mw(Zp + 1, 0.0);
    std::vector<Factorization> mf(Zp + 1);
    for (u64 m = 1; m <= Zp; ++m) {
        mf[m] = trial_factor(m);
        i64 t = std::gcd(m, P) == 1 ? detail::theta_closed(r, mf[m]) : theta_bruteforce(r, m, P);
        if (!t) continue;
        double w = double(t) / (double(m) * double(m));
        for (auto [p, e] : mf[m]) w /= 1 - 1 / (double(p) * double(p));
        mw[m] = w;
    }
    std::vector<double> terms;
    for (u64 d = 1; d <= Z; ++d) {
        if (std::gcd(d, P) != 1 || !detail::residue_count(r, d)) continue;
        const Factorization fd = trial_factor(d);
        double dw = 1.0 / (double(d) * double(d) * double(d));
        for (auto [p, e] : fd) dw /= 1 - 1 / (double(p) * double(p));
        // squares g | d^infinity with g <= Zp
        std::vector<u64> gs{1};
        for (auto [p, e] : fd) {
            std::size_t n0 = gs.size();
            for (std::size_t i = 0; i < n0; ++i)
                for (u64 g = gs[i] * p * p; g <= Zp; g *= p * p) gs.push_back(g);
        }
        std::sort(gs.begin(), gs.end());
        for (u64 g : gs) {
            const i64 pc = detail::phi_circ_closed(r, d, trial_factor(g));
            if (!pc) continue;
            double sm = 0, comp = 0;
            for (u64 m = 1; m * g <= Zp; ++m) {
                if (mw[m] == 0 || std::gcd(m, d) != 1) continue;
                double y = mw[m] - comp, t = sm + y;
                comp = (t - sm) - y;
                sm = t;
            }
            terms.push_back(dw * double(pc) / (double(g) * double(g)) * sm);
        }
    }
    double s = 0;
    for (double t : terms) s += t;
    return s;
}

// S_{d,n,r}: sum over square-free N in [X, X+Y], N mod d^2 in R_{r,d}, P not dividing N,
// of (N/n) (((r^2 N - 4P)/d^2)/n).
inline i64 S_dnr(u64 d, u64 n, u64 r, u64 X, u64 Y, u64 P, const FactorSieve& sieve)
{
    detail::require_odd_prime(P);
    if (4 * P <= r * r * (X + Y)) throw std::domain_error("S_dnr requires 4P > r^2 (X+Y)");
    if (d * d > 4 * P) throw std::domain_error("S_dnr requires d^2 <= 4P");
    const RemainderSet R = remainder_set(r, d, P);
    if (!R.admissible) return 0;
    const u64 d2 = d * d;
    i64 s = 0;
    for (u64 t : R.residues) {
        u64 N = X + (t + d2 - X % d2) % d2;
        for (; N <= X + Y; N += d2) {
            if (N % P == 0 || mu(N, sieve) == 0) continue;
            int x = kronecker(i64(N), i64(n));
            if (!x) continue;
            i64 q = (i64(r * r) * i64(N) - 4 * i64(P)) / i64(d2);
            s += x * kronecker(q, i64(n));
        }
    }
    return s;
}

// Main term (Y/zeta(2)) eta(d^2 n)/phi(d^2 n) phi°(g) theta_r(n'), g = gcd(d^infinity, n).
inline double S_dnr_main_term(u64 d, u64 n, u64 r, u64 Y, u64 P)
{
    detail::require_odd_prime(P);
    if (std::gcd(d, P) != 1 || !detail::residue_count(r, d)) return 0;
    u64 g = 1, rest = n;
    for (auto [p, e] : trial_factor(d))
        while (rest % p == 0) {
            rest /= p;
            g *= p;
        }
    const i64 pc = detail::phi_circ_closed(r, d, trial_factor(g));
    const i64 th = std::gcd(rest, P) == 1 ? detail::theta_closed(r, trial_factor(rest)) : theta_bruteforce(r, rest, P);
    const Factorization f = trial_factor(d * d * n);
    double eta_over_phi = 1;
    for (auto [p, e] : f) {
        eta_over_phi *= double(p) / double(p + 1);
        eta_over_phi /= double(p - 1) * std::pow(double(p), e - 1);
    }
    return double(Y) * 6 / (std::numbers::pi * std::numbers::pi) * eta_over_phi * double(pc) * double(th);
}

}  // namespace murmur

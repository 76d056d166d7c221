#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace murmur {

namespace detail {

inline void require_discriminant(u64 d)
{
    if (d == 0 || d % 4 == 1 || d % 4 == 2)
        throw std::domain_error("-" + std::to_string(d) + " is not a discriminant");
}

// Primes below 2^20, enough to factor (b^2 + d)/4 for d up to 3e12.
inline const std::vector<std::uint32_t>& small_primes()
{
    static const std::vector<std::uint32_t> ps = [] {
        std::vector<std::uint32_t> v;
        for_each_prime(1u << 20, [&](u64 p) { v.push_back(std::uint32_t(p)); });
        return v;
    }();
    return ps;
}

}  // namespace detail

// Number of primitive reduced forms of discriminant -d, by direct enumeration.
// O(d); this is the oracle, not the production route.
inline u64 gauss_h_bruteforce(u64 d)
{
    detail::require_discriminant(d);
    u64 h = 0;
    for (i64 a = 1; 3 * a * a <= i64(d); ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b + i64(d);
            if (num % (4 * a)) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            ++h;
        }
    }
    return h;
}

// Primitive class numbers h(-d) for every d <= dmax by one sweep over all reduced
// forms. Entries for non-discriminants are 0.
inline std::vector<u64> gauss_h_table(u64 dmax)
{
    std::vector<u64> h(dmax + 1, 0);
    for (i64 a = 1; 3 * a * a <= i64(dmax); ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 c0 = a;
            for (i64 c = c0;; ++c) {
                i64 d = 4 * a * c - b * b;
                if (d > i64(dmax)) break;
                if (a == c && b < 0) continue;
                if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
                ++h[d];
            }
        }
    }
    return h;
}

// h(-d) with the automorphism weights 1/3 at -3 and 1/2 at -4.
inline Rational weighted_h(u64 d, u64 h)
{
    if (d == 3) return Rational(i64(h), 3);
    if (d == 4) return Rational(i64(h), 2);
    return Rational(i64(h));
}

// H_1(-d) rebuilt as sum over f^2 | d of weighted h(-d/f^2), from a table of
// primitive class numbers covering [1, d].
inline Rational hurwitz_from_h(u64 d, const std::vector<u64>& h)
{
    if (d % 4 == 1 || d % 4 == 2) return Rational(0);
    Rational s(0);
    for (u64 f = 1; f * f <= d; ++f) {
        if (d % (f * f)) continue;
        u64 e = d / (f * f);
        if (e % 4 == 1 || e % 4 == 2) continue;
        s += weighted_h(e, h.at(e));
    }
    return s;
}

// Hurwitz class number H_1(-d): all reduced forms of discriminant -d, with
// multiples of x^2+y^2 weighted 1/2 and multiples of x^2+xy+y^2 weighted 1/3.
// Loops over b in [0, sqrt(d/3)] with b = d mod 2 and counts divisors a of
// m = (b^2+d)/4 with b <= a <= sqrt(m). The m-values are factored by sieving
// the quadratic b^2 + d over small primes.
inline Rational hurwitz_H1(u64 d)
{
    if (d == 0) throw std::domain_error("hurwitz_H1(0)");
    if (d % 4 == 1 || d % 4 == 2) return Rational(0);
    const u64 bmax = isqrt(d / 3);
    const u64 par = d & 1;
    const u64 nb = bmax < par ? 0 : (bmax - par) / 2 + 1;
    std::vector<u64> rest(nb);
    std::vector<Factorization> fac(nb);
    for (u64 i = 0; i < nb; ++i) {
        u64 b = par + 2 * i;
        u64 m = (b * b + d) / 4;
        int e = 0;
        while ((m & 1) == 0) {
            m >>= 1;
            ++e;
        }
        if (e) fac[i].push_back({2, e});
        rest[i] = m;
    }
    const u64 mmax = (bmax * bmax + d) / 4;
    const auto& ps = detail::small_primes();
    if (u64(ps.back()) * ps.back() < mmax) throw std::length_error("hurwitz_H1: discriminant too large");
    for (std::size_t k = 1; k < ps.size(); ++k) {
        const u64 p = ps[k];
        if (p * p > mmax) break;
        const u64 nd = (p - d % p) % p;
        u64 roots[2];
        int nr = 0;
        if (nd == 0) {
            roots[nr++] = 0;
        } else if (kronecker(i64(nd), i64(p)) == 1) {
            u64 t = sqrt_mod_prime(nd, p);
            roots[nr++] = t;
            roots[nr++] = p - t;
        }
        for (int j = 0; j < nr; ++j) {
            u64 b1 = (roots[j] % 2 == par) ? roots[j] : roots[j] + p;
            for (u64 b = b1; b <= bmax; b += 2 * p) {
                u64 i = (b - par) / 2;
                int e = 0;
                while (rest[i] % p == 0) {
                    rest[i] /= p;
                    ++e;
                }
                if (e) fac[i].push_back({p, e});
            }
        }
    }
    i64 whole = 0;
    bool half = false, third = false;
    std::vector<u64> divs;
    for (u64 i = 0; i < nb; ++i) {
        const u64 b = par + 2 * i;
        const u64 m = (b * b + d) / 4;
        if (rest[i] > 1) fac[i].push_back({rest[i], 1});
        divs.assign(1, 1);
        for (auto [p, e] : fac[i]) {
            std::size_t n0 = divs.size();
            u64 pk = 1;
            for (int t = 0; t < e; ++t) {
                pk *= p;
                for (std::size_t j = 0; j < n0; ++j) divs.push_back(divs[j] * pk);
            }
        }
        for (u64 a : divs) {
            if (a < b || a == 0 || a > m / a) continue;
            const u64 c = m / a;
            if (b == 0) {
                if (a == c)
                    half = true;
                else
                    ++whole;
            } else if (a == b && a == c) {
                third = true;
            } else if (a == b || a == c) {
                ++whole;
            } else {
                whole += 2;
            }
        }
    }
    Rational r(whole);
    if (half) r += Rational(1, 2);
    if (third) r += Rational(1, 3);
    return r;
}

// Table of H_1(-d) for d in [dmin, dmax].
struct HurwitzTable {
    u64 dmin = 1;
    u64 dmax = 0;
    std::vector<Rational> values;

    bool covers(u64 d) const { return d >= dmin && d <= dmax; }
    const Rational& at(u64 d) const
    {
        if (!covers(d))
            throw std::length_error("Hurwitz table [" + std::to_string(dmin) + ", " + std::to_string(dmax) +
                                    "] does not cover " + std::to_string(d));
        return values[d - dmin];
    }
    Rational operator()(u64 d) const { return at(d); }
    friend bool operator==(const HurwitzTable&, const HurwitzTable&) = default;
};

// On-demand H_1 for callers without a table.
struct DirectHurwitz {
    Rational operator()(u64 d) const { return hurwitz_H1(d); }
};

inline constexpr u64 default_table_budget = u64(1) << 27;

inline HurwitzTable hurwitz_sieve(u64 dmin, u64 dmax, unsigned threads = 0, u64 budget = default_table_budget)
{
    if (dmin == 0 || dmax < dmin) throw std::invalid_argument("hurwitz_sieve: need 1 <= dmin <= dmax");
    if (dmax - dmin + 1 > budget) throw std::length_error("hurwitz_sieve: range exceeds entry budget");
    HurwitzTable t{dmin, dmax, std::vector<Rational>(dmax - dmin + 1)};
    parallel_for(t.values.size(), [&](std::size_t i) { t.values[i] = hurwitz_H1(dmin + i); }, threads);
    return t;
}

// Cache layout, little-endian: "MURH1", u32 version, u64 dmin, u64 dmax, then
// for every nonzero entry u32 zeros-before, i64 numerator, u32 denominator, and
// finally u32 trailing zeros.
namespace detail {
template <class T>
void put(std::ostream& os, T v)
{
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(static_cast<u64>(v) >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}
template <class T>
T get(std::istream& is)
{
    unsigned char buf[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) throw std::runtime_error("truncated Hurwitz cache");
    u64 v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= u64(buf[i]) << (8 * i);
    return static_cast<T>(v);
}
}  // namespace detail

inline constexpr std::uint32_t cache_version = 1;

inline void save_table(const HurwitzTable& t, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("MURH1", 5);
    detail::put<std::uint32_t>(os, cache_version);
    detail::put<u64>(os, t.dmin);
    detail::put<u64>(os, t.dmax);
    std::uint32_t zeros = 0;
    for (const Rational& v : t.values) {
        if (v.num() == 0) {
            ++zeros;
            continue;
        }
        detail::put<std::uint32_t>(os, zeros);
        detail::put<i64>(os, v.num());
        detail::put<std::uint32_t>(os, std::uint32_t(v.den()));
        zeros = 0;
    }
    detail::put<std::uint32_t>(os, zeros);
    if (!os) throw std::runtime_error("write failed for " + path);
}

inline HurwitzTable load_table(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    char magic[5];
    if (!is.read(magic, 5) || std::memcmp(magic, "MURH1", 5) != 0) throw std::runtime_error(path + ": bad magic");
    if (detail::get<std::uint32_t>(is) != cache_version) throw std::runtime_error(path + ": unsupported version");
    HurwitzTable t;
    t.dmin = detail::get<u64>(is);
    t.dmax = detail::get<u64>(is);
    if (t.dmin == 0 || t.dmax < t.dmin) throw std::runtime_error(path + ": bad range");
    const u64 n = t.dmax - t.dmin + 1;
    t.values.reserve(n);
    while (true) {
        u64 zeros = detail::get<std::uint32_t>(is);
        if (t.values.size() + zeros > n) throw std::runtime_error(path + ": overlong zero run");
        t.values.resize(t.values.size() + zeros, Rational(0));
        if (t.values.size() == n) break;
        i64 num = detail::get<i64>(is);
        i64 den = detail::get<std::uint32_t>(is);
        t.values.emplace_back(num, den);
    }
    return t;
}

struct LTruncationPolicy {
    enum class Mode { fixed, level_scaled };
    u64 T = 100000;
    Mode mode = Mode::fixed;

    static LTruncationPolicy fixed(u64 T) { return {T, Mode::fixed}; }
    // T = ceil(Y^(5/6) P^(5/12) X^(-1/12))
    static LTruncationPolicy level_scaled(double X, double Y, double P)
    {
        double t = std::pow(Y, 5.0 / 6) * std::pow(P, 5.0 / 12) * std::pow(X, -1.0 / 12);
        return {std::max<u64>(1, u64(std::ceil(t))), Mode::level_scaled};
    }
};

struct LValue {
    double value;
    double bound;
};

// Constant in the truncation bound |sum_{n>T} chi(n)/n| <= C sqrt(d) log d / T,
// from partial summation against a Polya-Vinogradov bound 2 sqrt(d) log d.
inline constexpr double l_tail_constant = 4.0;

// (sqrt(d)/pi) sum_{n<=T} (-d/n)/n with its truncation bound.
inline LValue class_number_via_L(u64 d, LTruncationPolicy policy)
{
    detail::require_discriminant(d);
    if (d <= 4) throw std::domain_error("class_number_via_L needs d > 4");
    double s = 0;
    for (u64 n = 1; n <= policy.T; ++n) {
        int k = kronecker(-i64(d), i64(n));
        if (k) s += double(k) / double(n);
    }
    const double sd = std::sqrt(double(d));
    return {sd / std::numbers::pi * s,
            sd / std::numbers::pi * l_tail_constant * sd * std::log(double(d)) / double(policy.T)};
}

}  // namespace murmur

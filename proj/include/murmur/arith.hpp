#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <new>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace murmur {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64((unsigned __int128)a * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline u64 isqrt(u64 n)
{
    u64 r = u64(std::sqrt(double(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(u64 n)
{
    u64 r = isqrt(n);
    return r * r == n;
}

// Deterministic Miller-Rabin; these bases suffice below 3.3e24.
inline bool is_prime_u64(u64 n)
{
    if (n < 2) return false;
    static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : bases)
        if (n % p == 0) return n == p;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : bases) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Kronecker symbol (a/n), full extension to n <= 0 and even n.
inline int kronecker(i64 a, i64 n)
{
    static constexpr int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    int k = (v & 1) ? tab2[a & 7] : 1;
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    while (a != 0) {
        v = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++v;
        }
        if (v & 1) k *= tab2[n & 7];
        if (a & n & 2) k = -k;
        i64 r = a < 0 ? -a : a;
        a = n % r;
        n = r;
    }
    return n == 1 ? k : 0;
}

// Square root of a modulo an odd prime p (Tonelli-Shanks). Requires (a/p) != -1.
inline u64 sqrt_mod_prime(u64 a, u64 p)
{
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (powmod(a, (p - 1) / 2, p) != 1) throw std::domain_error("sqrt_mod_prime: non-residue");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = u64(s), c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

struct PrimePower {
    u64 p;
    int e;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};
using Factorization = std::vector<PrimePower>;

// Smallest-prime-factor sieve. Composite n store spf[n] <= sqrt(limit) in 16 bits;
// primes store 0, which keeps 10^8 entries at 200 MB.
class FactorSieve {
public:
    explicit FactorSieve(u64 limit) : limit_(limit)
    {
        if (limit < 2) throw std::invalid_argument("FactorSieve: limit must be >= 2");
        if (limit >= (u64(1) << 32)) throw std::length_error("FactorSieve: limit must be below 2^32");
        try {
            spf_.assign(limit + 1, 0);
        } catch (const std::bad_alloc&) {
            throw std::length_error("FactorSieve: cannot allocate " + std::to_string(limit) + " entries");
        }
        for (u64 p = 2; p * p <= limit; ++p) {
            if (spf_[p]) continue;
            for (u64 j = p * p; j <= limit; j += p)
                if (!spf_[j]) spf_[j] = std::uint16_t(p);
        }
        for (u64 n = 2; n <= limit; ++n)
            if (!spf_[n]) primes_.push_back(std::uint32_t(n));
    }

    u64 limit() const { return limit_; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }

    u64 spf(u64 n) const
    {
        check(n);
        if (n < 2) throw std::domain_error("spf undefined below 2");
        return spf_[n] ? spf_[n] : n;
    }
    bool is_prime(u64 n) const
    {
        if (n <= limit_) return n >= 2 && spf_[n] == 0;
        return is_prime_u64(n);
    }

    // Works past the sieve limit by trial division with sieved primes, then a
    // primality test on the cofactor.
    Factorization factor(u64 n) const
    {
        if (n == 0) throw std::domain_error("factor(0)");
        Factorization f;
        auto push = [&](u64 p) {
            if (!f.empty() && f.back().p == p)
                ++f.back().e;
            else
                f.push_back({p, 1});
        };
        if (n > limit_) {
            for (std::uint32_t p : primes_) {
                if (u64(p) * p > n) break;
                if (n % p) continue;
                do {
                    push(p);
                    n /= p;
                } while (n % p == 0);
                if (n <= limit_) break;
            }
            if (n > limit_) {
                if (!primes_.empty() && u64(primes_.back()) * primes_.back() < n && !is_prime_u64(n))
                    throw std::length_error("factor: cofactor beyond sieve reach");
                push(n);
                return f;
            }
        }
        while (n > 1) {
            u64 p = spf_[n] ? spf_[n] : n;
            push(p);
            n /= p;
        }
        return f;
    }

private:
    void check(u64 n) const
    {
        if (n > limit_) throw std::out_of_range("value " + std::to_string(n) + " beyond sieve limit");
    }

    u64 limit_;
    std::vector<std::uint16_t> spf_;
    std::vector<std::uint32_t> primes_;
};

inline FactorSieve build_sieve(u64 limit) { return FactorSieve(limit); }

namespace detail {
inline void require_range(u64 n, const FactorSieve& s)
{
    if (n == 0) throw std::domain_error("argument must be positive");
    if (n > s.limit()) throw std::out_of_range("value " + std::to_string(n) + " beyond sieve limit");
}
}  // namespace detail

inline int mu(u64 n, const FactorSieve& s)
{
    detail::require_range(n, s);
    int m = 1;
    for (auto [p, e] : s.factor(n)) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

inline bool is_squarefree(u64 n, const FactorSieve& s) { return mu(n, s) != 0; }

inline u64 euler_phi(u64 n, const FactorSieve& s)
{
    detail::require_range(n, s);
    u64 r = 1;
    for (auto [p, e] : s.factor(n)) {
        r *= p - 1;
        for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
}

// eta(m) = m / psi(m) = prod_{p | m} p/(p+1)
inline Rational eta(u64 m, const FactorSieve& s)
{
    detail::require_range(m, s);
    Rational r(1);
    for (auto [p, e] : s.factor(m)) r *= Rational(i64(p), i64(p + 1));
    return r;
}

inline i64 sum_mu2_phi(u64 Z, const FactorSieve& s)
{
    detail::require_range(Z, s);
    __int128 acc = 0;
    for (u64 n = 1; n <= Z; ++n) {
        u64 phi = 1;
        bool sf = true;
        for (auto [p, e] : s.factor(n)) {
            if (e > 1) {
                sf = false;
                break;
            }
            phi *= p - 1;
        }
        if (sf) acc += phi;
    }
    if (acc > std::numeric_limits<i64>::max()) throw std::overflow_error("sum_mu2_phi overflow");
    return i64(acc);
}

// Square-free N <= Z with gcd(N, m) = 1.
inline u64 count_squarefree_twisted(u64 Z, u64 m, const FactorSieve& s)
{
    detail::require_range(Z, s);
    if (m == 0) throw std::domain_error("modulus must be positive");
    u64 c = 0;
    for (u64 n = 1; n <= Z; ++n)
        if (std::gcd(n, m) == 1 && mu(n, s) != 0) ++c;
    return c;
}

// Square-free N in [X, X+Y] with N = a mod m.
inline u64 squarefree_in_class_count(u64 X, u64 Y, u64 a, u64 m, const FactorSieve& s)
{
    if (m == 0) throw std::domain_error("modulus must be positive");
    if (std::gcd(a % m, m) != 1 && m != 1) throw std::domain_error("residue class not coprime to modulus");
    detail::require_range(X + Y, s);
    if (X == 0) throw std::domain_error("X must be positive");
    u64 first = X + ((a % m) + m - X % m) % m;
    u64 c = 0;
    for (u64 n = first; n <= X + Y; n += m)
        if (mu(n, s) != 0) ++c;
    return c;
}

// Calls fn(p) for every prime p <= hi with a segmented sieve; memory is O(sqrt(hi)).
template <class F>
void for_each_prime(u64 hi, F&& fn)
{
    if (hi < 2) return;
    u64 root = isqrt(hi);
    std::vector<char> small(root + 1, 1);
    std::vector<u64> base;
    for (u64 p = 2; p <= root; ++p) {
        if (!small[p]) continue;
        base.push_back(p);
        for (u64 j = p * p; j <= root; j += p) small[j] = 0;
    }
    const u64 seg = std::max<u64>(root, 1 << 18);
    std::vector<char> mark(seg);
    for (u64 lo = 2; lo <= hi; lo += seg) {
        u64 top = std::min(hi, lo + seg - 1);
        std::fill(mark.begin(), mark.end(), 1);
        for (u64 p : base) {
            if (p * p > top) break;
            u64 start = std::max(p * p, (lo + p - 1) / p * p);
            for (u64 j = start; j <= top; j += p) mark[j - lo] = 0;
        }
        for (u64 n = lo; n <= top; ++n)
            if (mark[n - lo]) fn(n);
    }
}

}  // namespace murmur

namespace murmur {

// Trial-division factorization for values too large or too scattered for a sieve.
inline Factorization trial_factor(u64 n)
{
    if (n == 0) throw std::domain_error("factor(0)");
    Factorization f;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

// Inverse of a modulo m, m >= 1, gcd(a, m) = 1.
inline u64 inverse_mod(i64 a, u64 m)
{
    i64 mm = i64(m);
    i64 r0 = ((a % mm) + mm) % mm, r1 = mm, s0 = 1, s1 = 0;
    while (r1) {
        i64 q = r0 / r1;
        std::swap(r0 -= q * r1, r1);
        std::swap(s0 -= q * s1, s1);
    }
    if (r0 != 1) throw std::domain_error("inverse_mod: not invertible");
    return u64(((s0 % mm) + mm) % mm);
}

inline int v2(u64 n)
{
    int v = 0;
    while (n && (n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    return v;
}

}  // namespace murmur

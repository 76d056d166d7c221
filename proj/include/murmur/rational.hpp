#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace murmur {

namespace detail {

template <class T>
struct wider;
template <>
struct wider<std::int32_t> {
    using type = std::int64_t;
};
template <>
struct wider<std::int64_t> {
    using type = __int128;
};

inline std::string to_string_i128(__int128 v)
{
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.insert(s.begin(), char('0' + int(u % 10)));
        u /= 10;
    }
    return neg ? "-" + s : s;
}

}  // namespace detail

// Exact fraction kept in lowest terms with a positive denominator.
// Intermediate products run in the next wider integer type; results that
// do not fit back into Int throw std::overflow_error.
template <class Int>
class BasicRational {
    using Wide = typename detail::wider<Int>::type;

public:
    constexpr BasicRational() = default;
    constexpr BasicRational(Int n) : num_(n), den_(1) {}
    BasicRational(Int n, Int d) { assign(Wide(n), Wide(d)); }

    Int num() const { return num_; }
    Int den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    double to_double() const { return double(num_) / double(den_); }

    BasicRational& operator+=(const BasicRational& o)
    {
        Int g = std::gcd(den_, o.den_);
        Wide n = Wide(num_) * (o.den_ / g) + Wide(o.num_) * (den_ / g);
        Wide d = Wide(den_ / g) * o.den_;
        assign(n, d);
        return *this;
    }
    BasicRational& operator-=(const BasicRational& o) { return *this += -o; }
    BasicRational& operator*=(const BasicRational& o)
    {
        Int g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
        Int g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        assign(Wide(num_ / g1) * (o.num_ / g2), Wide(den_ / g2) * (o.den_ / g1));
        return *this;
    }
    BasicRational& operator/=(const BasicRational& o)
    {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return *this *= BasicRational(o.den_, o.num_);
    }

    friend BasicRational operator-(BasicRational a)
    {
        a.num_ = -a.num_;
        return a;
    }
    friend BasicRational operator+(BasicRational a, const BasicRational& b) { return a += b; }
    friend BasicRational operator-(BasicRational a, const BasicRational& b) { return a -= b; }
    friend BasicRational operator*(BasicRational a, const BasicRational& b) { return a *= b; }
    friend BasicRational operator/(BasicRational a, const BasicRational& b) { return a /= b; }
    friend bool operator==(const BasicRational& a, const BasicRational& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const BasicRational& a, const BasicRational& b)
    {
        return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_;
    }
    friend std::ostream& operator<<(std::ostream& os, const BasicRational& r)
    {
        os << detail::to_string_i128(r.num_);
        if (r.den_ != 1) os << '/' << detail::to_string_i128(r.den_);
        return os;
    }

private:
    void assign(Wide n, Wide d)
    {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        Wide a = n < 0 ? -n : n, b = d;
        while (b) {
            Wide t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr Wide lo = Wide(std::numeric_limits<Int>::min());
        constexpr Wide hi = Wide(std::numeric_limits<Int>::max());
        if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
        num_ = Int(n);
        den_ = Int(d);
    }

    Int num_ = 0;
    Int den_ = 1;
};

using Rational = BasicRational<std::int64_t>;

}  // namespace murmur

#include <gtest/gtest.h>

#include "murmur/constants.hpp"
#include "murmur/multfns.hpp"

using namespace murmur;

TEST(Multfns, RemainderSetExamples)
{
    auto R = remainder_set(1, 1, 5);
    EXPECT_TRUE(R.admissible);
    EXPECT_EQ(R.residues, std::vector<u64>{0});

    R = remainder_set(1, 3, 5);
    EXPECT_EQ(R.residues, std::vector<u64>{2});

    R = remainder_set(2, 4, 7);
    ASSERT_EQ(R.residues.size(), 2u);
    for (u64 t : R.residues) {
        EXPECT_EQ(std::gcd(t, u64(4)), 1u);
        EXPECT_EQ((4 * t + 16 * 100 - 28) % 16, 0u);  // d^2 | r^2 N - 4P
    }
    EXPECT_THROW(remainder_set(1, 5, 5), std::domain_error);  // d^2 > 4P
    EXPECT_THROW(remainder_set(1, 1, 9), std::domain_error);
}

TEST(Multfns, RemainderSetMatchesBruteForce)
{
    for (u64 P : {7ull, 11ull, 13ull, 101ull})
        for (u64 r = 1; r <= 24; ++r)
            for (u64 d = 1; d * d <= 4 * P && d <= 24; ++d) {
                if (d % P == 0) continue;
                auto a = remainder_set(r, d, P), b = remainder_set_bruteforce(r, d, P);
                ASSERT_EQ(a.residues, b.residues) << r << " " << d << " " << P;
                ASSERT_LE(a.residues.size(), 2u);
                for (u64 t : a.residues) ASSERT_EQ(std::gcd(t, d), 1u);
            }
}

TEST(Multfns, ThetaExamples)
{
    EXPECT_EQ(theta(1, 3, 5), -1);
    EXPECT_EQ(theta(1, 9, 5), 3);
    EXPECT_EQ(theta(3, 9, 5), 6);
    EXPECT_EQ(theta_bruteforce(1, 9, 5), 3);
    EXPECT_THROW(theta(1, 2, 5), std::domain_error);
    EXPECT_THROW(theta(1, 12, 5), std::domain_error);
}

TEST(Multfns, ThetaMultiplicative)
{
    const u64 P = 101;
    for (u64 r = 1; r <= 12; ++r)
        for (u64 a = 1; a <= 40; ++a)
            for (u64 b = 1; a * b <= 500; ++b) {
                if (std::gcd(a, b) != 1) continue;
                auto ok = [](u64 m) { return v2(m) != 1 && v2(m) != 2; };
                if (!ok(a) || !ok(b) || !ok(a * b)) continue;
                ASSERT_EQ(theta(r, a * b, P), theta(r, a, P) * theta(r, b, P)) << r << " " << a << " " << b;
            }
}

TEST(Multfns, PhiCircExamples)
{
    const u64 P = 101;
    for (u64 r = 1; r <= 6; ++r)
        for (u64 d = 1; d <= 12; ++d) {
            auto R = remainder_set(r, d, P);
            EXPECT_EQ(phi_circ(r, d, 1, P), i64(R.residues.size())) << r << " " << d;
        }
    EXPECT_EQ(phi_circ(1, 3, 9, P), 6);
    // 2 || d, 2 || r, g even
    EXPECT_EQ(phi_circ(2, 6, 8, P), 0);
    EXPECT_EQ(phi_circ(2, 6, 8 * 9, P), 0);
    EXPECT_THROW(phi_circ(1, 3, 5, P), std::domain_error);  // 5 does not divide 3^inf
}

TEST(Multfns, WeirdSumFactorizes)
{
    // sum over a mod d^2 m in R_{r,d} equals phi°(g) theta(m/g), g = gcd(d^inf, m)
    const u64 P = 13;
    for (u64 r = 1; r <= 6; ++r)
        for (u64 d = 1; d <= 7; ++d) {
            if (d % P == 0 || !remainder_set(r, d, P).admissible) continue;
            for (u64 m = 1; m <= 60; ++m) {
                if (v2(m) == 1 || v2(m) == 2 || m % P == 0) continue;
                u64 g = 1, rest = m;
                for (auto [p, e] : trial_factor(d))
                    while (rest % p == 0) {
                        rest /= p;
                        g *= p;
                    }
                if (v2(g) == 1 || v2(g) == 2) continue;
                ASSERT_EQ(weirdsum_bruteforce(r, d, m, P), phi_circ(r, d, g, P) * theta(r, rest, P))
                    << r << " " << d << " " << m;
            }
        }
}

TEST(Multfns, NuAndQ)
{
    EXPECT_EQ(nu_exact(1), Rational(1));
    EXPECT_EQ(Q(1), Rational(1));
    EXPECT_EQ(nu_exact(2), Rational(11, 7));
    EXPECT_EQ(Q(2), Rational(4, 7));
    EXPECT_EQ(Q(4), Rational(0));
    EXPECT_DOUBLE_EQ(nu(2), 11.0 / 7);
    EXPECT_DOUBLE_EQ(Q_value(6), Q(6).to_double());
    for (u64 r = 1; r <= 2000; ++r) {
        Rational s(0);
        for (u64 d = 1; d <= r; ++d)
            if (r % d == 0) s += Q(d);
        ASSERT_EQ(s, nu_exact(r)) << r;
    }
}

TEST(Multfns, ThetaSumConverges)
{
    EXPECT_NEAR(theta_sum_partial(1, 1, 1, 101), 1.0, 1e-15);
    const double B = euler_constant(ConstantKind::B, 1000000).value;
    EXPECT_NEAR(theta_sum_partial(1, 200, 200, 10007), B, 0.05);
    EXPECT_NEAR(theta_sum_partial(6, 500, 500, 10007), B * nu(6), 0.02);
}

TEST(Multfns, CharacterSumS)
{
    const u64 X = 100000, Y = 10000, P = 100003;
    FactorSieve s(X + Y);
    // d = n = 1: square-free count in the window, P excluded
    i64 sf = 0;
    for (u64 N = X; N <= X + Y; ++N) sf += (N % P != 0 && mu(N, s) != 0);
    EXPECT_EQ(S_dnr(1, 1, 1, X, Y, P, s), sf);
    // (r, d) = (1, 2) is not admissible
    EXPECT_EQ(S_dnr(2, 5, 1, X, Y, P, s), 0);
    const double main = S_dnr_main_term(3, 5, 1, Y, P);
    const double got = double(S_dnr(3, 5, 1, X, Y, P, s));
    EXPECT_LT(std::abs(got - main), 4 * std::sqrt(double(Y)) + 0.05 * std::abs(main)) << got << " vs " << main;
    EXPECT_THROW(S_dnr(1, 1, 2, X, Y, P, s), std::domain_error);
}

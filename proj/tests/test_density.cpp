#include <gtest/gtest.h>

#include <cmath>

#include "murmur/density.hpp"
#include "murmur/signcheck.hpp"

using namespace murmur;

namespace {


DensityConfig cfg_k(int k)
{
    DensityConfig c;
    c.k = k;
    return c;
}

}  // namespace

TEST(Density, ChebyshevU)
{
    for (unsigned n : {0u, 1u, 2u, 6u, 22u})
        for (double t = 0.05; t < 3.1; t += 0.1) {
            const double x = std::cos(t);
            EXPECT_NEAR(chebyshev_U(n, x), std::sin((n + 1) * t) / std::sin(t), 1e-10 * (n + 1)) << n << " " << x;
        }
    EXPECT_DOUBLE_EQ(chebyshev_U(3, 1.0), 4.0);
}

TEST(Density, BesselAgainstStd)
{
    for (int n : {0, 1, 3, 7, 23})
        for (double x : {1e-3, 0.3, 1.0, 2.5, 7.0, 19.9, 31.0, 80.0, 600.0, 1e4}) {
            const double want = std::cyl_bessel_j(double(n), x);
            EXPECT_NEAR(bessel_J(n, x), want, 1e-12 + 1e-10 * std::abs(want)) << n << " " << x;
        }
}

TEST(Density, BelowFirstKinkIsElementary)
{
    const auto& c = constants_for(default_pmax);
    for (double y : {0.01, 0.1, 0.2}) {
        EXPECT_NEAR(murmuration_density(cfg_k(2), y), c.beta * std::sqrt(y) - c.gamma * y, 1e-13);
        EXPECT_NEAR(murmuration_density(cfg_k(6), y), c.beta * std::sqrt(y) / 5, 1e-13);
    }
}

TEST(Density, ChebyshevAndBesselAgree)
{
    for (int k : {2, 4, 8})
        for (double y : {0.1, 0.5, 1.0, 2.25, 10.0}) {
            auto cfg = cfg_k(k);
            auto b = murmuration_density_bessel(cfg, y);
            EXPECT_NEAR(b.value, murmuration_density(cfg, y), b.tail_bound + b.constants_bound + 1e-9)
                << k << " " << y;
            EXPECT_LE(b.tail_bound, 1e-4) << k << " " << y;
        }
}

TEST(Density, BesselBudgetIsEnforced)
{
    auto cfg = cfg_k(2);
    cfg.required_accuracy = 1e-30;
    EXPECT_THROW(murmuration_density_bessel(cfg, 10.0), std::runtime_error);
    EXPECT_THROW(murmuration_density(cfg_k(3), 1.0), std::domain_error);
    EXPECT_THROW(murmuration_density(cfg_k(2), 0.0), std::domain_error);
}

TEST(Density, PolylogMatchesDirectSeries)
{
    for (double x : {0.01, 0.1, 0.162, 0.25, 0.33, 0.4999, 0.7, 3.21}) {
        auto s = f_polylog(x, 2000000);
        EXPECT_NEAR(polylog_f(x), s.value, s.tail + 1e-9) << x;
    }
    EXPECT_NEAR(polylog_f(0.0), -f_max(), 1e-12);
    EXPECT_NEAR(polylog_f(0.5), -f_max(), 1e-12);
    EXPECT_NEAR(f_max(), std::sqrt(0.5) * 2.612375348685488, 1e-12);
}

TEST(Density, AsymptoticTracksChebyshev)
{
    for (int k : {2, 4})
        for (double y : {1e4, 1e5, 1e6}) {
            auto cfg = cfg_k(k);
            cfg.dmax = 2000;
            auto a = asymptotic_density(cfg, y);
            // the asymptotic form drops an O(1) remainder
            EXPECT_NEAR(a.value, murmuration_density(cfg, y), a.tail_bound + 1.0) << k << " " << y;
        }
    // weights 2 and 4 have opposite sign
    auto a2 = asymptotic_density(cfg_k(2), 1e4), a4 = asymptotic_density(cfg_k(4), 1e4);
    EXPECT_NEAR(a2.value, -a4.value, 1e-12);
}

TEST(Density, DyadicClosedForm)
{
    auto cfg = cfg_k(2);
    for (int i = 1; i <= 100; i += 3) {
        const double y = i / 100.0;
        EXPECT_NEAR(dyadic_density(cfg, 2.0, y), dyadic_closed_form_k2(y), 1e-6) << y;
    }
    EXPECT_NEAR(dyadic_closed_form_k2(0.0), 0.0, 1e-15);
    EXPECT_THROW(dyadic_closed_form_k2(1.5), std::domain_error);
    auto K = dyadic_constants();
    EXPECT_NEAR(K.a, 6.38936, 1e-4);
    EXPECT_NEAR(K.c, 2.6436, 1e-4);
}

TEST(Density, SmoothedWithFlatWeightIsDyadic)
{
    auto cfg = cfg_k(6);
    for (double y : {0.3, 2.0, 17.0}) {
        const double flat = smoothed_average(cfg, [](double) { return 1.0; }, 1.0, 2.0, y);
        EXPECT_NEAR(flat, smoothed_average_sharp(cfg, 2.0, y), 1e-8) << y;
    }
}

TEST(Density, BesselAntiderivative)
{
    for (int K : {5, 7, 9, 13}) {
        auto F = bessel_antiderivative(K);
        EXPECT_NEAR(F.integral_over_x(), -0.25, 1e-12) << K;
        for (double x : {0.7, 3.0, 12.5}) {
            const double h = 1e-4;
            const double d = (F(x + h) - F(x - h)) / (2 * h);
            const double want = std::cyl_bessel_j(double(K), x) / std::pow(x, 4);
            EXPECT_NEAR(d, want, 1e-7 * (1 + std::abs(want))) << K << " " << x;
        }
    }
    EXPECT_THROW(bessel_antiderivative(3), std::domain_error);
    EXPECT_THROW(bessel_antiderivative(6), std::domain_error);
}

TEST(Density, QuadratureHandlesKinks)
{
    auto r = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-13, 0, {0.3});
    EXPECT_NEAR(r.value, 0.045 + 0.245, 1e-13);
    auto c = integrate([](double x) { return std::complex<double>(std::cos(x), std::sin(x)); }, 0.0, std::numbers::pi, 1e-12);
    EXPECT_NEAR(c.value.real(), 0.0, 1e-12);
    EXPECT_NEAR(c.value.imag(), 2.0, 1e-12);
}

TEST(Density, SmallCases)
{
    EXPECT_DOUBLE_EQ(chebyshev_U(0, 0.7), 1.0);
    EXPECT_NEAR(chebyshev_U(1, 0.3), 0.6, 1e-15);
    EXPECT_NEAR(chebyshev_U(2, 0.5), 0.0, 1e-15);
    EXPECT_EQ(bessel_J(1, 0.0), 0.0);
    EXPECT_NEAR(bessel_J(1, 1e-6), 0.5e-6, 1e-13);
    auto F = bessel_antiderivative(5);
    ASSERT_EQ(F.c.size(), 1u);
    EXPECT_EQ(F.c.begin()->first, 4);
    EXPECT_DOUBLE_EQ(F.c.begin()->second, -1.0);
}

TEST(Density, KinksAtQuarterSquares)
{
    for (int k : {2, 4, 8})
        for (int r : {1, 2, 3}) {
            auto cfg = cfg_k(k);
            const double y0 = r * r / 4.0;
            // the gap closes like sqrt(h), the rate of the term switching on
            for (double h : {1e-8, 1e-12}) {
                const double lo = murmuration_density(cfg, y0 - h), hi = murmuration_density(cfg, y0 + h);
                EXPECT_LE(std::abs(lo - hi), 20 * std::sqrt(h)) << k << " " << r << " " << h;
            }
            // one-sided slopes differ: sqrt(4y - r^2) switches on at y0
            const double e = 1e-4;
            const double left = (murmuration_density(cfg, y0) - murmuration_density(cfg, y0 - e)) / e;
            const double right = (murmuration_density(cfg, y0 + e) - murmuration_density(cfg, y0)) / e;
            EXPECT_GT(std::abs(right - left), 0.1) << k << " " << r;
        }
}

TEST(Density, PositiveNearZero)
{
    for (int k : {2, 4, 6, 8, 24})
        for (double y : {1e-6, 1e-4, 0.01}) {
            const double v = murmuration_density(cfg_k(k), y);
            EXPECT_GT(v, 0) << k << " " << y;
            EXPECT_LT(v / std::sqrt(y), 10) << k << " " << y;
        }
}

TEST(Density, AsymptoticSignIsGlobal)
{
    auto c8 = cfg_k(8), c24 = cfg_k(24), c2 = cfg_k(2);
    for (double y : {10.0, 300.0, 5000.0}) {
        EXPECT_DOUBLE_EQ(asymptotic_density(c8, y).value, asymptotic_density(c24, y).value);
        EXPECT_DOUBLE_EQ(asymptotic_density(c2, y).value, -asymptotic_density(c8, y).value);
    }
    // d = 1 term at T = 0 reaches -M_max
    EXPECT_NEAR(universal_asymptotic(0.0, c2).value, -1.84723, 1e-5);
}

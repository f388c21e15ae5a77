#include "spdelab/sobolev.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace spdelab;

namespace {

GridFunction parabola(std::size_t n) {
    return GridFunction::sample(n, [](double x) { return x * (1 - x); });
}

double bessel_form(double kappa, double x) {
    const double ax = std::abs(x);
    const double nu = (1.0 - 2.0 * kappa) / 4.0;
    return std::pow(ax, -2.0 * nu) * 2.0 * std::pow(2.0 * ax, nu) * std::cyl_bessel_k(nu, ax);
}

}  // namespace

TEST(SpaceSpec, Construction) {
    const auto s = SpaceSpec::negative(2.0, 1.0, 0.2);
    EXPECT_DOUBLE_EQ(s.gamma, -0.7);
    EXPECT_TRUE(s.is_negative_order());
    EXPECT_THROW(s.integer_order(), std::invalid_argument);
    EXPECT_EQ(SpaceSpec::integer(2.0, 1.0, 2).integer_order(), 2);
    EXPECT_THROW(SpaceSpec::integer(2.0, 1.0, 3), std::invalid_argument);
    EXPECT_THROW(SpaceSpec::integer(1.0, 1.0, 0), std::invalid_argument);
    EXPECT_THROW(SpaceSpec::negative(2.0, 1.0, 0.5), std::invalid_argument);
    SpaceSpec bad{2.0, 1.0, -0.9, 0.2};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    EXPECT_NO_THROW(SpaceSpec::integer(2.0, 1.5, 0).validate_for_solver());
    EXPECT_THROW(SpaceSpec::integer(2.0, 2.0, 0).validate_for_solver(), std::invalid_argument);
    EXPECT_THROW(SpaceSpec::integer(2.0, 0.0, 0).validate_for_solver(), std::invalid_argument);
}

TEST(IntegerNorm, ParabolaOrderZero) {
    const auto spec = SpaceSpec::integer(2.0, 1.0, 0);
    EXPECT_NEAR(weighted_integer_norm(parabola(1000), spec), std::sqrt(1.0 / 30.0), 1e-6);
}

TEST(IntegerNorm, ParabolaOrderOneWithDistanceWeight) {
    // int u^2 + rho^2 u'^2 = 1/30 + 1/120.
    const auto spec = SpaceSpec::integer(2.0, 1.0, 1);
    EXPECT_NEAR(weighted_integer_norm(parabola(2000), spec), std::sqrt(1.0 / 24.0), 1e-6);
}

TEST(IntegerNorm, OrderTwoMatchesQuadrature) {
    // u = sin(pi x), p = 3, theta = 1.5, weight rho.
    boost::math::quadrature::tanh_sinh<double> q;
    const double pi = std::numbers::pi;
    const auto f = [&](double x) {
        const double r = std::min(x, 1 - x);
        const double u = std::sin(pi * x), du = pi * std::cos(pi * x), d2u = -pi * pi * u;
        return (std::pow(std::abs(u), 3) + std::pow(std::abs(r * du), 3) + std::pow(std::abs(r * r * d2u), 3)) *
               std::pow(r, 0.5);
    };
    const double exact = std::cbrt(q.integrate(f, 0.0, 0.5) + q.integrate(f, 0.5, 1.0));
    const auto u = GridFunction::sample(4000, [&](double x) { return std::sin(pi * x); });
    EXPECT_NEAR(weighted_integer_norm(u, SpaceSpec::integer(3.0, 1.5, 2)), exact, 1e-4 * exact);
    EXPECT_THROW(weighted_integer_norm(GridFunction(4), SpaceSpec::integer(2.0, 1.0, 1)), std::invalid_argument);
}

TEST(IntegerNorm, PsiWeightComparableToRho) {
    const auto psi = make_psi(2.0, 1.0);
    const auto u = parabola(1024);
    const auto spec = SpaceSpec::integer(2.0, 1.0, 1);
    const double r = weighted_integer_norm(u, spec);
    const double s = weighted_integer_norm(u, spec, psi);
    EXPECT_GT(s, r);
    EXPECT_LT(s, 50.0 * r);
}

TEST(IntegerNorm, TriangleAndThetaMonotone) {
    const auto u = parabola(512);
    const auto v = GridFunction::sample(512, [](double x) { return std::sin(7 * std::numbers::pi * x); });
    for (int order : {0, 1, 2}) {
        const auto spec = SpaceSpec::integer(3.0, 1.0, order);
        EXPECT_LE(weighted_integer_norm(u + v, spec),
                  weighted_integer_norm(u, spec) + weighted_integer_norm(v, spec) + 1e-12);
        double prev = 1e300;
        for (double theta : {0.5, 1.0, 2.0, 4.0}) {
            const double val = weighted_integer_norm(v, SpaceSpec::integer(3.0, theta, order));
            EXPECT_LT(val, prev);
            prev = val;
        }
    }
}

TEST(NormLadder, DetectsDivergentIntegrand) {
    const std::size_t levels[] = {256, 512, 1024, 2048, 4096};
    const auto spec = SpaceSpec::integer(2.0, 1.0, 0);
    const auto bad = weighted_integer_norm_ladder([](double x) { return std::pow(x, -0.6) * (1 - x); }, spec, levels);
    EXPECT_TRUE(bad.infinite);
    EXPECT_TRUE(std::isinf(bad.value));
    const auto good = weighted_integer_norm_ladder([](double x) { return std::pow(x, 0.2) * (1 - x); }, spec, levels);
    EXPECT_FALSE(good.infinite);
    EXPECT_EQ(good.value, good.values.back());
    EXPECT_EQ(good.values.size(), 5u);
    const std::size_t two[] = {64, 128};
    EXPECT_THROW(weighted_integer_norm_ladder([](double x) { return x; }, spec, two), std::invalid_argument);
}

TEST(DyadicNorm, ZeroHomogeneityAndTriangle) {
    const auto psi = make_psi(2.0, 1.0);
    const auto zeta = make_zeta(2.0);
    const auto spec = SpaceSpec::integer(2.0, 1.0, 0);
    const auto u = parabola(512);
    EXPECT_EQ(dyadic_norm(GridFunction(512), spec, zeta, psi), 0.0);
    const double a = dyadic_norm(u, spec, zeta, psi);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(dyadic_norm(3.0 * u, spec, zeta, psi), 3.0 * a, 1e-12 * a);
    const auto v = GridFunction::sample(512, [](double x) { return std::sin(5 * std::numbers::pi * x); });
    EXPECT_LE(dyadic_norm(u + v, spec, zeta, psi), a + dyadic_norm(v, spec, zeta, psi) + 1e-12);
    EXPECT_THROW(dyadic_norm(u, SpaceSpec::integer(2.0, 1.0, 1), zeta, psi), std::invalid_argument);
}

TEST(DyadicNorm, EquivalenceConstantStableUnderRefinement) {
    const auto psi = make_psi(2.0, 1.0);
    const auto zeta = make_zeta(2.0);
    const auto f = [](double x) { return std::sqrt(x) * (1 - x) * (2 + std::sin(9 * x)); };
    for (double theta : {0.5, 1.0, 1.8}) {
        const auto spec = SpaceSpec::integer(2.0, theta, 0);
        const auto ratio = [&](std::size_t n) {
            const auto u = GridFunction::sample(n, f);
            return dyadic_norm(u, spec, zeta, psi) / weighted_integer_norm(u, spec, psi);
        };
        const double r1 = ratio(1024), r2 = ratio(4096);
        EXPECT_GT(r1, 0.0);
        EXPECT_NEAR(r2 / r1, 1.0, 0.01) << theta;
    }
}

TEST(BesselPotential, MatchesCellwiseQuadrature) {
    const double kappa = 0.2;
    const auto table = shared_kernel_table(kappa);
    const std::size_t n = 16;
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) w[i] = std::sin(3.0 * i / n) + 0.2 * (i % 3);
    const double h = 1.0 / n;
    boost::math::quadrature::tanh_sinh<double> q;
    for (int level : {0, 1, -2}) {
        const double scale = std::exp(static_cast<double>(level));
        const double points[] = {-0.3, 0.0, 3 * h, 0.5, 11 * h, 1.0, 1.7};
        const auto conv = bessel_potential(w, level, *table, points);
        for (std::size_t k = 0; k < std::size(points); ++k) {
            const double x = points[k];
            double exact = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double xj = j * h;
                const auto integrand = [&](double y) {
                    const double wy = w[j] + (w[j + 1] - w[j]) * (y - xj) / h;
                    return bessel_form(kappa, (x - y) / scale) * wy / scale;
                };
                exact += q.integrate(integrand, xj, xj + h);
            }
            EXPECT_NEAR(conv[k], exact, 1e-5 * std::abs(exact) + 1e-12) << level << " " << x;
        }
    }
}

TEST(BesselPotential, OutputMeshCoversTheKernelReach) {
    for (int level : {-4, 0, 2}) {
        const auto mesh = bessel_output_mesh(64, level);
        for (std::size_t k = 1; k < mesh.size(); ++k) ASSERT_GT(mesh[k], mesh[k - 1]);
        EXPECT_LE(mesh.front(), -40.0 * std::exp(level) + 1e-12);
        EXPECT_GE(mesh.back(), 1.0 + 40.0 * std::exp(level) - 1e-12);
    }
}

TEST(BesselNorm, BasicProperties) {
    const double kappa = 0.25;
    const auto table = shared_kernel_table(kappa);
    const auto psi = make_psi(2.0, 1.0);
    const auto zeta = make_zeta(2.0);
    const auto spec = SpaceSpec::negative(2.0, 1.0, kappa);
    const auto u = GridFunction::sample(128, [](double x) { return std::sin(std::numbers::pi * x); });
    const double a = bessel_negative_norm(u, spec, zeta, psi, *table);
    EXPECT_GT(a, 0.0);
    EXPECT_EQ(bessel_negative_norm(GridFunction(128), spec, zeta, psi, *table), 0.0);
    EXPECT_NEAR(bessel_negative_norm(2.0 * u, spec, zeta, psi, *table), 2.0 * a, 1e-10 * a);
    const auto other = shared_kernel_table(0.3);
    EXPECT_THROW(bessel_negative_norm(u, spec, zeta, psi, *other), std::invalid_argument);
    EXPECT_THROW(bessel_negative_norm(u, SpaceSpec::integer(2.0, 1.0, 0), zeta, psi, *table),
                 std::invalid_argument);
}

TEST(BesselNorm, OscillationIsDamped) {
    const double kappa = 0.25;
    const auto table = shared_kernel_table(kappa);
    const auto psi = make_psi(2.0, 1.0);
    const auto zeta = make_zeta(2.0);
    const auto spec = SpaceSpec::negative(2.0, 1.0, kappa);
    const auto wide = GridFunction::sample(256, [](double x) { return std::sin(std::numbers::pi * x); });
    const auto narrow = GridFunction::sample(256, [](double x) { return std::sin(16 * std::numbers::pi * x); });
    const auto l2 = SpaceSpec::integer(2.0, 1.0, 0);
    ASSERT_NEAR(weighted_integer_norm(wide, l2, psi) / weighted_integer_norm(narrow, l2, psi), 1.0, 0.2);
    EXPECT_LT(bessel_negative_norm(narrow, spec, zeta, psi, *table),
              0.5 * bessel_negative_norm(wide, spec, zeta, psi, *table));
}

TEST(WeightedSup, Examples) {
    const auto psi = make_psi(2.0, 1.0);
    const auto u = GridFunction::sample(200, [&](double x) { return 3.0 * std::pow(psi(x), 0.7); });
    EXPECT_NEAR(weighted_sup(u, 0.7, psi), 3.0, 1e-12);
    EXPECT_EQ(weighted_sup(GridFunction(200), 0.7, psi), 0.0);
    EXPECT_NEAR(weighted_sup(u, 0.0, psi), u.sup_norm(), 1e-15);
    const auto x = GridFunction::sample(200, [](double t) { return t * (1 - t); });
    EXPECT_LT(weighted_sup(x, 0.5, psi), weighted_sup(x, 1.0, psi) * 10.0);
    EXPECT_TRUE(std::isinf(weighted_sup(x, 1e6, psi)));
}

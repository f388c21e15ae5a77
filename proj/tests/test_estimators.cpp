#include "spdelab/estimators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace spdelab;

namespace {

SampledField make_field(std::size_t n, std::size_t snapshots, double T,
                        const std::function<double(double, double)>& f) {
    SampledField field;
    for (std::size_t j = 0; j < snapshots; ++j) {
        const double t = T * static_cast<double>(j) / static_cast<double>(snapshots - 1);
        field.times.push_back(t);
        std::vector<double> row(n + 1);
        for (std::size_t i = 0; i <= n; ++i) row[i] = f(t, static_cast<double>(i) / static_cast<double>(n));
        field.rows.push_back(std::move(row));
    }
    return field;
}

bool has_issue(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v) {
        if (s.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(Statistics, MedianAndQuantile) {
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
    EXPECT_EQ(quantile({0.0, 10.0}, 0.25), 2.5);
    EXPECT_TRUE(std::isnan(median({})));
    EXPECT_THROW(quantile({1.0}, 1.5), std::invalid_argument);
}

TEST(Statistics, LogLogFit) {
    const double x[] = {1.0, 2.0, 4.0, 8.0};
    double y[4];
    for (int k = 0; k < 4; ++k) y[k] = 3.0 * std::pow(x[k], 0.7);
    const auto fit = fit_loglog(x, y);
    EXPECT_NEAR(fit.slope, 0.7, 1e-14);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-14);
    EXPECT_NEAR(fit.r2, 1.0, 1e-14);
    EXPECT_NEAR(fit.std_error, 0.0, 1e-7);
    const double bad[] = {1.0, 0.0, 1.0, 1.0};
    EXPECT_THROW(fit_loglog(x, bad), std::invalid_argument);
}

TEST(Lags, DyadicLadder) {
    EXPECT_EQ(dyadic_lag_cells(256, 0.025), (std::vector<std::size_t>{1, 2, 4}));
    EXPECT_EQ(dyadic_lag_cells(1024, 0.025), (std::vector<std::size_t>{1, 2, 4, 8, 16}));
}

TEST(SpaceEstimator, LinearProfileHasExponentOne) {
    const auto field = make_field(512, 4, 1.0, [](double t, double x) { return (1 + t) * x; });
    const auto e = holder_exponent_space(field);
    ASSERT_TRUE(e.defined);
    EXPECT_NEAR(e.value, 1.0, 1e-10);
    EXPECT_EQ(e.fits, 4u);
    EXPECT_EQ(e.lags.size(), e.log_increment.size());
}

TEST(SpaceEstimator, CuspNeedsTheMaxStatistic) {
    const auto field = make_field(2048, 2, 1.0, [](double, double x) { return std::pow(std::abs(x - 0.5), 0.3); });
    SpaceEstimatorOptions opts;
    opts.statistic = IncrementStatistic::max;
    const auto e = holder_exponent_space(field, opts);
    ASSERT_TRUE(e.defined);
    EXPECT_NEAR(e.value, 0.3, 0.02);
    opts.statistic = IncrementStatistic::median;
    EXPECT_GT(holder_exponent_space(field, opts).value, 0.8);
}

TEST(SpaceEstimator, ScaleInvariant) {
    const auto f = [](double, double x) { return std::sin(3 * x) + std::sqrt(x); };
    const auto a = holder_exponent_space(make_field(512, 2, 1.0, f));
    const auto b = holder_exponent_space(make_field(512, 2, 1.0, [&](double t, double x) { return 1e-6 * f(t, x); }));
    EXPECT_NEAR(a.value, b.value, 1e-10);
}

TEST(SpaceEstimator, StableUnderRefinement) {
    const auto f = [](double t, double x) { return std::sin(3 * x + t); };
    const auto a = holder_exponent_space(make_field(256, 3, 1.0, f), {0.125, {}, IncrementStatistic::median});
    const auto b = holder_exponent_space(make_field(1024, 3, 1.0, f), {0.125, {}, IncrementStatistic::median});
    EXPECT_NEAR(a.value, b.value, 0.01);
    EXPECT_NEAR(b.value, 1.0, 0.03);
}

TEST(SpaceEstimator, DegenerateAndBadInput) {
    const auto zero = make_field(512, 3, 1.0, [](double, double) { return 0.0; });
    const auto e = holder_exponent_space(zero);
    EXPECT_FALSE(e.defined);
    EXPECT_FALSE(e.note.empty());
    SpaceEstimatorOptions opts;
    opts.lag_cells = {1, 2, 4};
    EXPECT_THROW(holder_exponent_space(zero, opts), std::invalid_argument);
    opts.lag_cells = {1, 4, 2, 8};
    EXPECT_THROW(holder_exponent_space(zero, opts), std::invalid_argument);
    opts.lag_cells = {};
    opts.margin = 0.6;
    EXPECT_THROW(holder_exponent_space(zero, opts), std::invalid_argument);
}

TEST(TimeEstimator, LinearInTime) {
    const auto field = make_field(64, 129, 1.0, [](double t, double x) { return t * (1 + x); });
    const auto e = holder_exponent_time(field);
    ASSERT_TRUE(e.defined);
    EXPECT_NEAR(e.value, 1.0, 1e-10);
}

TEST(TimeEstimator, BrownianPathHasExponentOneHalf) {
    const std::size_t m = 4097;
    std::mt19937_64 gen(12);
    std::normal_distribution<double> z;
    std::vector<double> w(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) w[j] = w[j - 1] + z(gen) * std::sqrt(1.0 / (m - 1));
    SampledField field;
    for (std::size_t j = 0; j < m; ++j) {
        field.times.push_back(static_cast<double>(j) / (m - 1));
        field.rows.push_back(std::vector<double>(17, w[j]));
    }
    const auto e = holder_exponent_time(field);
    ASSERT_TRUE(e.defined);
    EXPECT_NEAR(e.value, 0.5, 0.05);
}

TEST(TimeEstimator, BadInput) {
    EXPECT_THROW(holder_exponent_time(make_field(16, 32, 1.0, [](double t, double) { return t; })),
                 std::invalid_argument);
    auto field = make_field(16, 65, 1.0, [](double t, double) { return t; });
    field.times[10] += 1e-3;
    EXPECT_THROW(holder_exponent_time(field), std::invalid_argument);
    field.times[10] = field.times[9];
    EXPECT_THROW(field.check(), std::invalid_argument);
}

TEST(BoundaryDecay, ParabolaHasSlopeOne) {
    const auto field = make_field(1024, 3, 1.0, [](double t, double x) { return (1 + t) * x * (1 - x); });
    const auto e = boundary_decay(field);
    ASSERT_TRUE(e.defined);
    EXPECT_NEAR(e.slope, 1.0, 0.03);
    EXPECT_NEAR(e.left.slope, e.right.slope, 1e-10);
    EXPECT_GE(e.points.size(), 16u);
}

TEST(BoundaryDecay, PowerOfTheWeight) {
    const auto psi = make_psi(2.0, 1.0);
    const auto field = make_field(1024, 2, 1.0, [&](double, double x) { return std::pow(psi(x), 0.7); });
    BoundaryDecayOptions opts;
    opts.hi = 0.02;
    const auto e = boundary_decay(field, opts);
    ASSERT_TRUE(e.defined);
    EXPECT_NEAR(e.slope, 0.7, 0.02);
}

TEST(BoundaryDecay, WindowNeedsEightPoints) {
    const auto field = make_field(64, 2, 1.0, [](double, double x) { return x * (1 - x); });
    EXPECT_THROW(boundary_decay(field), std::invalid_argument);
    BoundaryDecayOptions opts;
    opts.hi = 0.2;
    EXPECT_THROW(boundary_decay(make_field(1024, 2, 1.0, [](double, double x) { return x; }), opts),
                 std::invalid_argument);
}

TEST(BoundaryDecay, VanishingEnvelopeIsUndefined) {
    const auto e = boundary_decay(make_field(1024, 2, 1.0, [](double, double) { return 0.0; }));
    EXPECT_FALSE(e.defined);
    EXPECT_FALSE(e.note.empty());
}

TEST(Targets, DefaultParameterSet) {
    const auto t = HolderTargets::with_default_alpha_beta(0.3, 0.25, 32.0, 1.0);
    EXPECT_TRUE(t.violations().empty());
    const auto b = target_exponents(t);
    EXPECT_NEAR(t.alpha, 0.03125 + 0.053125 / 3.0, 1e-15);
    EXPECT_NEAR(t.beta, 0.03125 + 2.0 * 0.053125 / 3.0, 1e-15);
    EXPECT_NEAR(b.time, t.alpha - 1.0 / 32.0, 1e-15);
    EXPECT_NEAR(b.space, 0.5 - 0.3 - 2.0 * t.beta - 1.0 / 32.0, 1e-15);
    EXPECT_NEAR(b.weight, -0.8, 1e-15);
    EXPECT_NEAR(t.weight_exponent(), 0.8, 1e-15);
}

TEST(Targets, SmallKappaLargeP) {
    const auto t = HolderTargets::with_default_alpha_beta(0.01, 0.0, 1000.0, 1.0);
    const auto b = target_exponents(t);
    EXPECT_NEAR(b.time, 0.0811666666666667, 1e-12);
    EXPECT_NEAR(b.space, 0.1623333333333333, 1e-12);
    EXPECT_NEAR(b.weight, -0.51, 1e-12);
}

TEST(Targets, SpaceTargetDecreasesWithKappa) {
    double prev = 1.0;
    for (double kappa : {0.26, 0.3, 0.35, 0.4, 0.45}) {
        const auto b = target_exponents(HolderTargets::with_default_alpha_beta(kappa, 0.25, 200.0, 1.0));
        EXPECT_LT(b.space, prev);
        EXPECT_GT(b.space, 0.0);
        prev = b.space;
    }
}

TEST(Targets, ViolationsAreNamed) {
    const auto at_threshold = HolderTargets::with_default_alpha_beta(0.25, 0.1, 12.0, 1.0);
    EXPECT_TRUE(has_issue(at_threshold.violations(), "p ≤ 6/(1−2κ)"));
    const auto kappa_low = HolderTargets::with_default_alpha_beta(0.2, 0.25, 100.0, 1.0);
    EXPECT_TRUE(has_issue(kappa_low.violations(), "κ must exceed λ"));
    auto t = HolderTargets::with_default_alpha_beta(0.3, 0.25, 32.0, 1.0);
    t.beta = t.alpha;
    EXPECT_TRUE(has_issue(t.violations(), "β ≤ α"));
    t.theta = 100.0;
    t.alpha = 0.0;
    const auto v = t.violations();
    EXPECT_GE(v.size(), 3u);
    EXPECT_THROW(target_exponents(t), ValidationError);
}

TEST(WeightedField, ZeroFieldIsBounded) {
    const auto psi = make_psi(2.0, 1.0);
    const auto targets = HolderTargets::with_default_alpha_beta(0.3, 0.25, 32.0, 1.0);
    const auto r = weighted_holder_field(make_field(256, 65, 0.1, [](double, double) { return 0.0; }), targets, psi);
    EXPECT_TRUE(r.weighted_sup_finite);
    EXPECT_EQ(r.weighted_sup, 0.0);
    EXPECT_FALSE(r.space.defined);
    EXPECT_TRUE(r.space_consistent);
}

TEST(WeightedField, RecoversTheUnweightedProfile) {
    const auto psi = make_psi(2.0, 1.0);
    const auto targets = HolderTargets::with_default_alpha_beta(0.3, 0.25, 32.0, 1.0);
    const double w = targets.weight_exponent();
    const auto field = make_field(1024, 65, 0.1, [&](double t, double x) { return (1 + t) * std::pow(psi(x), w) * x; });
    const auto r = weighted_holder_field(field, targets, psi);
    ASSERT_TRUE(r.space.defined);
    EXPECT_NEAR(r.space.value, 1.0, 1e-6);
    ASSERT_TRUE(r.time.defined);
    EXPECT_NEAR(r.time.value, 1.0, 1e-6);
    EXPECT_NEAR(r.weighted_sup, 1.1 * (1.0 - 1.0 / 1024), 1e-9);
    EXPECT_TRUE(r.space_consistent);
    EXPECT_TRUE(r.time_consistent);
}

TEST(WeightedField, FewSnapshotsSkipTime) {
    const auto psi = make_psi(2.0, 1.0);
    const auto targets = HolderTargets::with_default_alpha_beta(0.3, 0.25, 32.0, 1.0);
    const auto r = weighted_holder_field(make_field(256, 5, 0.1, [](double, double x) { return x * (1 - x); }),
                                         targets, psi);
    EXPECT_FALSE(r.time.defined);
    EXPECT_FALSE(r.time.note.empty());
    EXPECT_TRUE(r.space.defined);
}

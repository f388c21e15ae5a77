#pragma once

#include "spdelab/errors.hpp"
#include "spdelab/solver.hpp"
#include "spdelab/weight.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace spdelab {

/// Snapshots of a space-time field on the uniform grid x_i = i/N.
///
/// Unlike GridFunction, rows need not vanish at the boundary, so closed-form
/// calibration fields and weighted fields can be fed to the estimators as is.
struct SampledField {
    std::vector<double> times;
    std::vector<std::vector<double>> rows;  ///< rows[j][i] = u(times[j], x_i)

    std::size_t intervals() const;
    void check() const;

    static SampledField from(const Trajectory& traj);
};

double median(std::vector<double> v);
/// Linear-interpolation quantile, q in [0,1].
double quantile(std::vector<double> v, double q);

struct SlopeFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
};

/// Least squares of log y against log x; every x and y must be positive.
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Reduction of |increments| over positions (space) or times (time).
enum class IncrementStatistic { median, mean, max };

struct ExponentEstimate {
    bool defined = false;
    double value = std::numeric_limits<double>::quiet_NaN();
    double half_width = std::numeric_limits<double>::quiet_NaN();  ///< median standard error of the slopes
    double r2 = std::numeric_limits<double>::quiet_NaN();          ///< median R^2 of the fits
    std::size_t fits = 0;                                          ///< snapshots or positions used
    std::vector<double> lags;           ///< physical lags
    std::vector<double> log_increment;  ///< per lag, median over fits of the log statistic
    std::string note;
};

struct SpaceEstimatorOptions {
    double margin = 0.1;                   ///< x window is [margin, 1 - margin]
    std::vector<std::size_t> lag_cells;    ///< empty selects 1, 2, 4, ... cells up to margin/4
    IncrementStatistic statistic = IncrementStatistic::median;
};

struct TimeEstimatorOptions {
    double x_lo = 0.1;
    double x_hi = 0.9;
    std::vector<std::size_t> lag_steps{1, 2, 4, 8, 16};  ///< in snapshot gaps
    IncrementStatistic statistic = IncrementStatistic::median;
};

/// Dyadic cell lags 1, 2, 4, ... not exceeding max_lag (in x units).
std::vector<std::size_t> dyadic_lag_cells(std::size_t intervals, double max_lag);

/// Per snapshot: statistic over x in the window of |u(t, x+h) - u(t, x)| for
/// each lag, log-log slope against h; the median slope over snapshots.
/// All-zero snapshots are skipped; if every snapshot is degenerate the
/// estimate is undefined.
ExponentEstimate holder_exponent_space(const SampledField& field, const SpaceEstimatorOptions& opts = {});
ExponentEstimate holder_exponent_space(const Trajectory& traj, const SpaceEstimatorOptions& opts = {});

/// Per node in the x window: statistic over t of |u(t+h, x) - u(t, x)|, log-log
/// slope against h; the median over nodes. Needs at least 64 uniformly spaced
/// snapshots.
ExponentEstimate holder_exponent_time(const SampledField& field, const TimeEstimatorOptions& opts = {});
ExponentEstimate holder_exponent_time(const Trajectory& traj, const TimeEstimatorOptions& opts = {});

struct BoundaryDecayOptions {
    double lo = 0.0;  ///< 0 selects 2 dx
    double hi = 0.05;
};

struct DecayPoint {
    int side;          ///< 0 left, 1 right
    double distance;   ///< rho(x)
    double envelope;   ///< M(x) = max over snapshots of |u(t, x)|
};

struct BoundaryDecayEstimate {
    bool defined = false;
    double slope = std::numeric_limits<double>::quiet_NaN();  ///< mean of the two sides
    double half_width = std::numeric_limits<double>::quiet_NaN();
    SlopeFit left;
    SlopeFit right;
    std::vector<DecayPoint> points;
    std::string note;
};

/// Slope of log M against log rho near each boundary, averaged. The
/// half-width is the mean standard error plus half the left/right gap.
BoundaryDecayEstimate boundary_decay(const SampledField& field, const BoundaryDecayOptions& opts = {});
BoundaryDecayEstimate boundary_decay(const Trajectory& traj, const BoundaryDecayOptions& opts = {});

/// Parameter set (kappa, lambda, p, theta, alpha, beta, delta) of the
/// weighted regularity statement.
struct HolderTargets {
    double kappa = 0.3;
    double lambda = 0.25;
    double p = 32.0;
    double theta = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;

    /// Admissible (alpha, beta) at 1/3 and 2/3 of (1/p, 1/4 - kappa/2 - 1/(2p)).
    static HolderTargets with_default_alpha_beta(double kappa, double lambda, double p, double theta,
                                                 double delta = 0.0);

    /// Every violated inequality; empty when admissible.
    std::vector<std::string> violations() const;
    void validate() const;

    double weight_exponent() const noexcept { return 0.5 + kappa + 1.0 / p - theta / p + delta; }
};

struct ExponentBundle {
    double time;    ///< alpha - 1/p
    double space;   ///< 1/2 - kappa - 2 beta - 1/p - delta
    double weight;  ///< -1/2 - kappa - 1/p + theta/p - delta
};

ExponentBundle target_exponents(const HolderTargets& targets);

struct HolderReport {
    HolderTargets targets;
    ExponentBundle predicted{};
    ExponentEstimate space;  ///< on the weighted field
    ExponentEstimate time;   ///< on the weighted field
    double weighted_sup = 0.0;
    bool weighted_sup_finite = true;
    bool space_consistent = false;  ///< estimate >= target - tolerance
    bool time_consistent = false;
    std::string note;
};

/// Forms v = psi^{-w} u with w the weight exponent of the targets and runs both
/// Hölder estimators on the whole interval [dx, 1 - dx], with dyadic space lags up to max(0.025, 8 dx).
HolderReport weighted_holder_field(const SampledField& field, const HolderTargets& targets, const WeightFn& psi,
                                   double tolerance = 0.05);
HolderReport weighted_holder_field(const Trajectory& traj, const HolderTargets& targets, const WeightFn& psi,
                                   double tolerance = 0.05);

}  // namespace spdelab

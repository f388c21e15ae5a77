#pragma once

#include "spdelab/coefficients.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/grid.hpp"
#include "spdelab/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace spdelab {

enum class NoiseKind {
    multiplicative,  ///< xi |u|^{1+lambda} dB, with the cutoff applied
    additive,        ///< xi dB, the classical stochastic heat calibration case
};

/// du = (a u_xx + b u_x + c u) dt + xi |u|^{1+lambda} dB on (0,1), u = 0 on the boundary.
struct SpdeProblem {
    CoefficientField a = CoefficientField::constant(1.0);
    CoefficientField b;
    CoefficientField c;
    CoefficientField xi = CoefficientField::constant(1.0);
    double lambda = 0.0;
    GridFunction u0 = GridFunction(2);
    double T = 1.0;
    double delta0 = 1.0;
    double K = 2.0;
    NoiseKind noise = NoiseKind::multiplicative;

    /// Every violated hypothesis, empty when the problem is admissible.
    std::vector<std::string> violations() const;
    void validate() const;
};

/// |clamp(u, -m, m)|^{1+lambda}.
double cutoff_nonlinearity(double u, double m, double lambda);

/// (1+lambda)(2m)^lambda, a Lipschitz constant of cutoff_nonlinearity.
double lipschitz_bound(double m, double lambda);

/// Scheme-level tolerance for negative undershoot:
/// 10 dt^{1/2} sup|xi| sup|eta_k| (modes dt)^{1/2}.
double negativity_tolerance(double dt, double xi_sup, std::size_t modes);

/// Drift fully implicit (tridiagonal), noise explicit with coefficients frozen
/// at the left end of each step. Caches the factorization of I - dt L per
/// coefficient piece.
class SemiImplicitStepper {
public:
    SemiImplicitStepper(const SpdeProblem& problem, std::size_t intervals, double dt, double cutoff);

    double dt() const noexcept { return dt_; }

    /// Explicit noise contribution xi(t,x_i) g(u_i) W_i into `out` (boundary 0).
    void noise_term(std::span<const double> u, double t, std::span<const double> noise,
                    std::span<double> out) const;

    /// Advances u in place from t to t + dt. Throws NonFiniteState on NaN/Inf.
    void advance(std::span<double> u, double t, std::span<const double> noise);

private:
    void refresh(double t);

    const SpdeProblem* problem_;
    std::size_t n_;
    double dt_;
    double cutoff_;
    std::size_t key_a_ = static_cast<std::size_t>(-1);
    std::size_t key_b_ = static_cast<std::size_t>(-1);
    std::size_t key_c_ = static_cast<std::size_t>(-1);
    std::vector<double> lower_, upper_prime_, inv_denom_;
    std::vector<double> rhs_;
};

/// One semi-implicit Euler-Maruyama step:
/// (I - dt L_t) u_next = u + xi(t) g(u) noise.
GridFunction step(const GridFunction& u, double t, double dt, const SpdeProblem& problem, double m,
                  const GridFunction& noise);

struct SchemeParams {
    std::size_t intervals = 256;
    double dt = 0.0;         ///< 0 selects dx^2/4
    std::size_t modes = 0;   ///< 0 selects intervals - 1
    double cutoff = 1e3;     ///< m
    std::vector<double> snapshot_times;  ///< rounded to the step lattice; 0 and T always kept
    /// nu in the cutoff-activity threshold sup psi^{-nu}|u| >= m / sup psi^nu.
    double cutoff_weight_exponent = 0.5;
    double divergence_bound = 1e6;
};

/// count equally spaced times on [0, T], both ends included.
std::vector<double> uniform_snapshot_times(double T, std::size_t count);

struct Snapshot {
    double t;
    GridFunction u;
};

struct TrajectoryMeta {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
    double dt = 0.0;
    std::size_t intervals = 0;
    std::size_t modes = 0;
    double cutoff = 0.0;
    double T = 0.0;
    double lambda = 0.0;
    double negativity_tol = 0.0;
    bool diverged = false;
    bool cutoff_active = false;
    double first_cutoff_time = std::numeric_limits<double>::quiet_NaN();
    std::size_t steps = 0;
    double running_min = 0.0;  ///< min over every step, not only snapshots
    std::string diagnostic;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    TrajectoryMeta meta;

    std::size_t intervals() const { return snapshots.empty() ? meta.intervals : snapshots.front().u.intervals(); }
};

/// Integrates the cutoff equation pathwise from u0 to T.
///
/// A path whose sup norm exceeds the divergence bound or turns non-finite is
/// returned truncated and marked diverged.
Trajectory simulate_path(const SpdeProblem& problem, const SchemeParams& scheme, RngStream rng);

struct MaxPrincipleReport {
    double worst = 0.0;  ///< most negative value seen (0 if none)
    double tolerance = 0.0;
    bool pass = true;
};

MaxPrincipleReport check_max_principle(const Trajectory& traj, double tol);

}  // namespace spdelab

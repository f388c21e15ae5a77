#include "spdelab/solver.hpp"

#include "spdelab/noise.hpp"
#include "spdelab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spdelab {

std::vector<std::string> SpdeProblem::violations() const {
    std::vector<std::string> out;
    const auto fmt = [](const char* what, double v) {
        std::ostringstream s;
        s << what << " (got " << v << ")";
        return s.str();
    };
    if (!(delta0 > 0.0)) out.push_back(fmt("delta0 must be positive", delta0));
    if (!(K > 0.0)) out.push_back(fmt("K must be positive", K));
    if (!(T > 0.0)) out.push_back(fmt("T must be positive", T));
    if (!(lambda >= 0.0 && lambda < 0.5)) out.push_back(fmt("lambda must lie in [0, 1/2)", lambda));
    const double min_a = a.min_value();
    if (min_a < delta0) out.push_back(fmt("a >= delta0 violated: min a", min_a));
    const double c2 = a.c2_norm() + b.c2_norm() + c.c2_norm();
    if (!(c2 < K)) out.push_back(fmt("|a|_C2 + |b|_C2 + |c|_C2 < K violated: sum", c2));
    const double xi_sup = xi.sup_abs();
    if (xi_sup > K) out.push_back(fmt("sup|xi| <= K violated: sup|xi|", xi_sup));
    if (u0.min_value() < 0.0) out.push_back(fmt("u0 >= 0 violated: min u0", u0.min_value()));
    return out;
}

void SpdeProblem::validate() const {
    if (auto v = violations(); !v.empty()) throw ValidationError(std::move(v));
}

double cutoff_nonlinearity(double u, double m, double lambda) {
    const double clamped = std::abs(std::clamp(u, -m, m));
    if (lambda == 0.0) return clamped;
    return std::pow(clamped, 1.0 + lambda);
}

double lipschitz_bound(double m, double lambda) {
    if (!(m > 0.0)) throw std::invalid_argument("cutoff level must be positive");
    return (1.0 + lambda) * std::pow(2.0 * m, lambda);
}

double negativity_tolerance(double dt, double xi_sup, std::size_t modes) {
    return 10.0 * std::sqrt(dt) * xi_sup * kEtaSup * std::sqrt(static_cast<double>(modes) * dt);
}

SemiImplicitStepper::SemiImplicitStepper(const SpdeProblem& problem, std::size_t intervals, double dt,
                                         double cutoff)
    : problem_(&problem), n_(intervals), dt_(dt), cutoff_(cutoff) {
    if (intervals < 2) throw std::invalid_argument("stepper needs at least two intervals");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff level must be positive");
    if (!(2.0 * dt * problem.c.sup_abs() < 1.0)) {
        throw std::invalid_argument("time step must satisfy dt < 1/(2 sup|c|)");
    }
    lower_.resize(n_ + 1);
    upper_prime_.resize(n_ + 1);
    inv_denom_.resize(n_ + 1);
    rhs_.resize(n_ + 1);
}

void SemiImplicitStepper::refresh(double t) {
    const auto ka = problem_->a.piece_index(t);
    const auto kb = problem_->b.piece_index(t);
    const auto kc = problem_->c.piece_index(t);
    if (ka == key_a_ && kb == key_b_ && kc == key_c_) return;
    key_a_ = ka;
    key_b_ = kb;
    key_c_ = kc;
    const auto& pa = problem_->a.pieces()[ka];
    const auto& pb = problem_->b.pieces()[kb];
    const auto& pc = problem_->c.pieces()[kc];
    const double h = 1.0 / static_cast<double>(n_);
    // Thomas factorization of I - dt L on the interior nodes.
    double prev_upper_prime = 0.0;
    for (std::size_t i = 1; i < n_; ++i) {
        const double x = static_cast<double>(i) * h;
        const double diff = dt_ * pa.value(x) / (h * h);
        const double adv = dt_ * pb.value(x) / (2.0 * h);
        const double lower = -(diff - adv);
        const double diag = 1.0 + 2.0 * diff - dt_ * pc.value(x);
        const double upper = -(diff + adv);
        const double denom = diag - (i > 1 ? lower * prev_upper_prime : 0.0);
        if (denom == 0.0) throw std::runtime_error("singular implicit operator");
        lower_[i] = lower;
        inv_denom_[i] = 1.0 / denom;
        upper_prime_[i] = upper * inv_denom_[i];
        prev_upper_prime = upper_prime_[i];
    }
}

void SemiImplicitStepper::noise_term(std::span<const double> u, double t, std::span<const double> noise,
                                     std::span<double> out) const {
    const auto& xi = problem_->xi.piece(t);
    const double h = 1.0 / static_cast<double>(n_);
    const double lambda = problem_->lambda;
    const bool additive = problem_->noise == NoiseKind::additive;
    out[0] = 0.0;
    out[n_] = 0.0;
    for (std::size_t i = 1; i < n_; ++i) {
        const double g = additive ? 1.0 : cutoff_nonlinearity(u[i], cutoff_, lambda);
        out[i] = xi.value(static_cast<double>(i) * h) * g * noise[i];
    }
}

void SemiImplicitStepper::advance(std::span<double> u, double t, std::span<const double> noise) {
    if (u.size() != n_ + 1 || noise.size() != n_ + 1) {
        throw std::invalid_argument("state size does not match the stepper grid");
    }
    refresh(t);
    noise_term(u, t, noise, rhs_);
    double prev = 0.0;
    for (std::size_t i = 1; i < n_; ++i) {
        const double r = u[i] + rhs_[i];
        prev = (r - (i > 1 ? lower_[i] * prev : 0.0)) * inv_denom_[i];
        rhs_[i] = prev;
    }
    u[n_ - 1] = rhs_[n_ - 1];
    for (std::size_t i = n_ - 2; i >= 1; --i) {
        u[i] = rhs_[i] - upper_prime_[i] * u[i + 1];
    }
    u[0] = 0.0;
    u[n_] = 0.0;
    for (std::size_t i = 1; i < n_; ++i) {
        if (!std::isfinite(u[i])) {
            std::ostringstream msg;
            msg << "non-finite value at node " << i << " after step from t = " << t;
            throw NonFiniteState(msg.str());
        }
    }
}

GridFunction step(const GridFunction& u, double t, double dt, const SpdeProblem& problem, double m,
                  const GridFunction& noise) {
    SemiImplicitStepper stepper(problem, u.intervals(), dt, m);
    std::vector<double> next(u.values().begin(), u.values().end());
    stepper.advance(next, t, noise.values());
    return GridFunction(std::move(next));
}

std::vector<double> uniform_snapshot_times(double T, std::size_t count) {
    if (count < 2) throw std::invalid_argument("need at least two snapshot times");
    std::vector<double> times(count);
    for (std::size_t j = 0; j < count; ++j) {
        times[j] = T * static_cast<double>(j) / static_cast<double>(count - 1);
    }
    times.back() = T;
    return times;
}

Trajectory simulate_path(const SpdeProblem& problem, const SchemeParams& scheme, RngStream rng) {
    problem.validate();
    const std::size_t n = scheme.intervals;
    if (problem.u0.intervals() != n) throw std::invalid_argument("u0 grid does not match the scheme grid");
    const double h = 1.0 / static_cast<double>(n);
    const double dt_nominal = scheme.dt > 0.0 ? scheme.dt : 0.25 * h * h;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(problem.T / dt_nominal)));
    const double dt = problem.T / static_cast<double>(steps);
    const std::size_t modes = scheme.modes > 0 ? scheme.modes : n - 1;

    std::vector<std::size_t> snap_steps{0, steps};
    for (double t : scheme.snapshot_times) {
        if (t < 0.0 || t > problem.T) throw std::invalid_argument("snapshot time outside [0, T]");
        snap_steps.push_back(static_cast<std::size_t>(std::llround(t / dt)));
    }
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

    Trajectory traj;
    auto& meta = traj.meta;
    meta.master_seed = rng.master_seed();
    meta.path_index = rng.path_index();
    meta.dt = dt;
    meta.intervals = n;
    meta.modes = modes;
    meta.cutoff = scheme.cutoff;
    meta.T = problem.T;
    meta.lambda = problem.lambda;
    meta.negativity_tol = negativity_tolerance(dt, problem.xi.sup_abs(), modes);
    traj.snapshots.reserve(snap_steps.size());

    const BasisSpec basis(modes, n);
    NoiseSynthesizer synth(basis);
    SemiImplicitStepper stepper(problem, n, dt, scheme.cutoff);

    const WeightFn psi = make_psi(problem.K, problem.delta0);
    const double nu = scheme.cutoff_weight_exponent;
    const double threshold = scheme.cutoff / std::pow(psi.max_value(), nu);
    std::vector<double> inv_weight(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) inv_weight[i] = std::pow(psi(static_cast<double>(i) * h), -nu);

    std::vector<double> u(problem.u0.values().begin(), problem.u0.values().end());
    std::vector<double> field(n + 1, 0.0);
    NoiseIncrement inc;

    const auto observe = [&](double t) {
        double weighted = 0.0;
        double lo = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            weighted = std::max(weighted, inv_weight[i] * std::abs(u[i]));
            lo = std::min(lo, u[i]);
        }
        meta.running_min = std::min(meta.running_min, lo);
        if (!meta.cutoff_active && weighted >= threshold) {
            meta.cutoff_active = true;
            meta.first_cutoff_time = t;
        }
    };

    observe(0.0);
    std::size_t next_snap = 0;
    if (snap_steps[next_snap] == 0) {
        traj.snapshots.push_back({0.0, GridFunction(u)});
        ++next_snap;
    }
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        sample_increments_into(inc, basis, dt, rng);
        synth.synthesize(inc.dw, field);
        try {
            stepper.advance(u, t, field);
        } catch (const NonFiniteState& e) {
            meta.diverged = true;
            meta.diagnostic = e.what();
            meta.steps = k;
            return traj;
        }
        const double t_next = k + 1 == steps ? problem.T : static_cast<double>(k + 1) * dt;
        observe(t_next);
        double sup = 0.0;
        for (double v : u) sup = std::max(sup, std::abs(v));
        if (sup > scheme.divergence_bound) {
            meta.diverged = true;
            std::ostringstream msg;
            msg << "sup|u| = " << sup << " exceeded the divergence bound at t = " << t_next;
            meta.diagnostic = msg.str();
            meta.steps = k + 1;
            return traj;
        }
        if (next_snap < snap_steps.size() && snap_steps[next_snap] == k + 1) {
            traj.snapshots.push_back({t_next, GridFunction(u)});
            ++next_snap;
        }
    }
    meta.steps = steps;
    return traj;
}

MaxPrincipleReport check_max_principle(const Trajectory& traj, double tol) {
    if (tol < 0.0) throw std::invalid_argument("tolerance must be nonnegative");
    MaxPrincipleReport out;
    out.tolerance = tol;
    out.worst = std::min(0.0, traj.meta.running_min);
    for (const auto& s : traj.snapshots) out.worst = std::min(out.worst, s.u.min_value());
    out.pass = out.worst >= -tol;
    return out;
}

}  // namespace spdelab

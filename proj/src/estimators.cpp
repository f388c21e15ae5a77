#include "spdelab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spdelab {

std::size_t SampledField::intervals() const {
    if (rows.empty() || rows.front().size() < 3) throw std::invalid_argument("field has no usable rows");
    return rows.front().size() - 1;
}

void SampledField::check() const {
    if (rows.empty()) throw std::invalid_argument("field has no snapshots");
    if (times.size() != rows.size()) throw std::invalid_argument("field needs one time per row");
    const std::size_t width = rows.front().size();
    if (width < 3) throw std::invalid_argument("field rows need at least three nodes");
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != width) throw std::invalid_argument("field rows differ in length");
        if (j > 0 && !(times[j] > times[j - 1])) throw std::invalid_argument("field times must increase");
    }
}

SampledField SampledField::from(const Trajectory& traj) {
    SampledField f;
    f.times.reserve(traj.snapshots.size());
    f.rows.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) {
        f.times.push_back(s.t);
        f.rows.emplace_back(s.u.values().begin(), s.u.values().end());
    }
    return f;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs matching samples, at least two");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("log-log fit needs distinct abscissae");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - fit.intercept - fit.slope * lx[i];
        sse += r * r;
    }
    fit.std_error = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return fit;
}

std::vector<std::size_t> dyadic_lag_cells(std::size_t intervals, double max_lag) {
    std::vector<std::size_t> out;
    const double h = 1.0 / static_cast<double>(intervals);
    for (std::size_t L = 1; static_cast<double>(L) * h <= max_lag * (1.0 + 1e-12); L *= 2) out.push_back(L);
    return out;
}

namespace {

double reduce(std::vector<double>& v, IncrementStatistic stat) {
    switch (stat) {
        case IncrementStatistic::mean:
            return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        case IncrementStatistic::max:
            return *std::max_element(v.begin(), v.end());
        case IncrementStatistic::median:
            break;
    }
    return median(std::move(v));
}

void check_lags(std::span<const std::size_t> lags) {
    if (lags.size() < 2 || lags.front() == 0) throw std::invalid_argument("need at least two positive lags");
    for (std::size_t k = 1; k < lags.size(); ++k) {
        if (lags[k] <= lags[k - 1]) throw std::invalid_argument("lags must increase");
    }
    if (lags.back() < 8 * lags.front()) throw std::invalid_argument("lags must span at least three octaves");
}

struct FitCollector {
    std::vector<double> slopes, errors, r2s;
    std::vector<std::vector<double>> logs;  // per lag

    explicit FitCollector(std::size_t lags) : logs(lags) {}

    void add(std::span<const double> lag_values, std::span<const double> stats) {
        const auto fit = fit_loglog(lag_values, stats);
        slopes.push_back(fit.slope);
        errors.push_back(fit.std_error);
        r2s.push_back(fit.r2);
        for (std::size_t k = 0; k < stats.size(); ++k) logs[k].push_back(std::log(stats[k]));
    }

    ExponentEstimate finish(std::vector<double> lag_values, const char* empty_note) {
        ExponentEstimate e;
        e.lags = std::move(lag_values);
        e.fits = slopes.size();
        if (slopes.empty()) {
            e.note = empty_note;
            return e;
        }
        e.defined = true;
        e.value = median(slopes);
        e.half_width = median(errors);
        e.r2 = median(r2s);
        for (auto& l : logs) e.log_increment.push_back(median(std::move(l)));
        return e;
    }
};

}  // namespace

ExponentEstimate holder_exponent_space(const SampledField& field, const SpaceEstimatorOptions& opts) {
    field.check();
    if (!(opts.margin > 0.0 && opts.margin < 0.5)) throw std::invalid_argument("margin must lie in (0, 1/2)");
    const std::size_t n = field.intervals();
    const double h = 1.0 / static_cast<double>(n);
    const auto lags = opts.lag_cells.empty() ? dyadic_lag_cells(n, opts.margin / 4.0) : opts.lag_cells;
    check_lags(lags);
    const auto i_lo = static_cast<std::size_t>(std::ceil(opts.margin * static_cast<double>(n) - 1e-9));
    const auto i_hi = static_cast<std::size_t>(std::floor((1.0 - opts.margin) * static_cast<double>(n) + 1e-9));
    if (i_hi < i_lo + lags.back() + 1) throw std::invalid_argument("largest lag does not fit in the x window");

    std::vector<double> lag_values;
    for (std::size_t L : lags) lag_values.push_back(static_cast<double>(L) * h);
    FitCollector fits(lags.size());
    std::vector<double> stats(lags.size());
    std::vector<double> buf;
    for (const auto& row : field.rows) {
        bool usable = true;
        for (std::size_t k = 0; k < lags.size() && usable; ++k) {
            buf.clear();
            for (std::size_t i = i_lo; i + lags[k] <= i_hi; ++i) buf.push_back(std::abs(row[i + lags[k]] - row[i]));
            stats[k] = reduce(buf, opts.statistic);
            usable = stats[k] > 0.0 && std::isfinite(stats[k]);
        }
        if (usable) fits.add(lag_values, stats);
    }
    return fits.finish(std::move(lag_values), "every snapshot is degenerate in the x window");
}

ExponentEstimate holder_exponent_space(const Trajectory& traj, const SpaceEstimatorOptions& opts) {
    return holder_exponent_space(SampledField::from(traj), opts);
}

ExponentEstimate holder_exponent_time(const SampledField& field, const TimeEstimatorOptions& opts) {
    field.check();
    const std::size_t m = field.times.size();
    if (m < 64) throw std::invalid_argument("time estimator needs at least 64 snapshots");
    const double gap = (field.times.back() - field.times.front()) / static_cast<double>(m - 1);
    for (std::size_t j = 1; j < m; ++j) {
        if (std::abs(field.times[j] - field.times[j - 1] - gap) > 1e-6 * gap) {
            throw std::invalid_argument("time estimator needs uniformly spaced snapshots");
        }
    }
    check_lags(opts.lag_steps);
    if (opts.lag_steps.back() >= m) throw std::invalid_argument("largest time lag exceeds the record");
    if (!(opts.x_lo >= 0.0 && opts.x_hi <= 1.0 && opts.x_lo <= opts.x_hi)) {
        throw std::invalid_argument("x window must lie inside [0, 1]");
    }
    const std::size_t n = field.intervals();
    const auto i_lo = static_cast<std::size_t>(std::ceil(opts.x_lo * static_cast<double>(n) - 1e-9));
    const auto i_hi = static_cast<std::size_t>(std::floor(opts.x_hi * static_cast<double>(n) + 1e-9));
    if (i_lo > i_hi) throw std::invalid_argument("x window contains no node");

    std::vector<double> lag_values;
    for (std::size_t L : opts.lag_steps) lag_values.push_back(static_cast<double>(L) * gap);
    FitCollector fits(opts.lag_steps.size());
    std::vector<double> stats(opts.lag_steps.size());
    std::vector<double> buf;
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
        bool usable = true;
        for (std::size_t k = 0; k < opts.lag_steps.size() && usable; ++k) {
            const std::size_t L = opts.lag_steps[k];
            buf.clear();
            for (std::size_t j = 0; j + L < m; ++j) buf.push_back(std::abs(field.rows[j + L][i] - field.rows[j][i]));
            stats[k] = reduce(buf, opts.statistic);
            usable = stats[k] > 0.0 && std::isfinite(stats[k]);
        }
        if (usable) fits.add(lag_values, stats);
    }
    return fits.finish(std::move(lag_values), "every node in the x window is degenerate");
}

ExponentEstimate holder_exponent_time(const Trajectory& traj, const TimeEstimatorOptions& opts) {
    return holder_exponent_time(SampledField::from(traj), opts);
}

BoundaryDecayEstimate boundary_decay(const SampledField& field, const BoundaryDecayOptions& opts) {
    field.check();
    const std::size_t n = field.intervals();
    const double h = 1.0 / static_cast<double>(n);
    const double lo = opts.lo > 0.0 ? opts.lo : 2.0 * h;
    if (!(lo < opts.hi && opts.hi <= 0.1)) throw std::invalid_argument("fit window must lie inside (0, 0.1]");

    std::vector<double> envelope(n + 1, 0.0);
    for (const auto& row : field.rows) {
        for (std::size_t i = 0; i <= n; ++i) envelope[i] = std::max(envelope[i], std::abs(row[i]));
    }
    BoundaryDecayEstimate out;
    std::vector<double> d[2], env[2];
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) * h;
        for (int side = 0; side < 2; ++side) {
            const double dist = side == 0 ? x : static_cast<double>(n - i) * h;
            if (dist >= lo - 1e-12 && dist <= opts.hi + 1e-12) {
                d[side].push_back(dist);
                env[side].push_back(envelope[i]);
                out.points.push_back({side, dist, envelope[i]});
            }
        }
    }
    std::sort(out.points.begin(), out.points.end(), [](const DecayPoint& a, const DecayPoint& b) {
        return a.side != b.side ? a.side < b.side : a.distance < b.distance;
    });
    if (d[0].size() < 8) throw std::invalid_argument("fit window needs at least 8 grid points");
    for (int side = 0; side < 2; ++side) {
        if (std::any_of(env[side].begin(), env[side].end(), [](double v) { return !(v > 0.0) || !std::isfinite(v); })) {
            out.note = "envelope vanishes or is non-finite in the fit window";
            return out;
        }
    }
    out.left = fit_loglog(d[0], env[0]);
    out.right = fit_loglog(d[1], env[1]);
    out.defined = true;
    out.slope = 0.5 * (out.left.slope + out.right.slope);
    out.half_width = 0.5 * (out.left.std_error + out.right.std_error) +
                     0.5 * std::abs(out.left.slope - out.right.slope);
    return out;
}

BoundaryDecayEstimate boundary_decay(const Trajectory& traj, const BoundaryDecayOptions& opts) {
    return boundary_decay(SampledField::from(traj), opts);
}

HolderTargets HolderTargets::with_default_alpha_beta(double kappa, double lambda, double p, double theta,
                                                     double delta) {
    HolderTargets t{kappa, lambda, p, theta, 0.0, 0.0, delta};
    const double lo = 1.0 / p;
    const double hi = 0.25 - kappa / 2.0 - 1.0 / (2.0 * p);
    t.alpha = lo + (hi - lo) / 3.0;
    t.beta = lo + 2.0 * (hi - lo) / 3.0;
    return t;
}

std::vector<std::string> HolderTargets::violations() const {
    std::vector<std::string> out;
    const auto add = [&](const std::string& what, double lhs, double rhs) {
        std::ostringstream s;
        s << what << " (" << lhs << " vs " << rhs << ")";
        out.push_back(s.str());
    };
    if (!(lambda >= 0.0 && lambda < 0.5)) add("λ ∈ [0, 1/2) violated", lambda, 0.5);
    if (!(kappa > lambda)) add("κ must exceed λ", kappa, lambda);
    if (!(kappa < 0.5)) add("κ < 1/2 violated", kappa, 0.5);
    if (kappa < 0.5 && lambda < 0.5) {
        const double p_kappa = 6.0 / (1.0 - 2.0 * kappa);
        const double p_lambda = 2.0 * lambda * theta / (1.0 - 2.0 * lambda);
        if (!(p > p_kappa)) add("p ≤ 6/(1−2κ)", p, p_kappa);
        if (!(p > p_lambda)) add("p ≤ 2λθ/(1−2λ)", p, p_lambda);
    }
    const double theta_hi = 1.0 + p * (0.5 + kappa);
    if (!(theta > 0.0 && theta <= theta_hi)) add("θ ∈ (0, 1+p(1/2+κ)] violated", theta, theta_hi);
    if (!(p > 0.0)) return out;
    const double beta_hi = 0.25 - kappa / 2.0 - 1.0 / (2.0 * p);
    if (!(alpha > 1.0 / p)) add("α ≤ 1/p", alpha, 1.0 / p);
    if (!(beta > alpha)) add("β ≤ α", beta, alpha);
    if (!(beta < beta_hi)) add("β ≥ 1/4−κ/2−1/(2p)", beta, beta_hi);
    const double delta_hi = 0.5 - kappa - 2.0 * beta - 1.0 / p;
    if (!(delta >= 0.0 && delta < delta_hi)) add("δ ∈ [0, 1/2−κ−2β−1/p) violated", delta, delta_hi);
    return out;
}

void HolderTargets::validate() const {
    if (auto v = violations(); !v.empty()) throw ValidationError(std::move(v));
}

ExponentBundle target_exponents(const HolderTargets& t) {
    t.validate();
    return {t.alpha - 1.0 / t.p, 0.5 - t.kappa - 2.0 * t.beta - 1.0 / t.p - t.delta,
            -0.5 - t.kappa - 1.0 / t.p + t.theta / t.p - t.delta};
}

HolderReport weighted_holder_field(const SampledField& field, const HolderTargets& targets, const WeightFn& psi,
                                   double tolerance) {
    field.check();
    HolderReport r;
    r.targets = targets;
    r.predicted = target_exponents(targets);
    const double w = targets.weight_exponent();
    const std::size_t n = field.intervals();
    const double h = 1.0 / static_cast<double>(n);

    std::vector<double> denom(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) denom[i] = std::pow(psi(static_cast<double>(i) * h), w);
    SampledField v;
    v.times = field.times;
    v.rows.reserve(field.rows.size());
    for (const auto& row : field.rows) {
        std::vector<double> out(n + 1, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (row[i] == 0.0) continue;
            out[i] = denom[i] > 0.0 ? row[i] / denom[i] : std::numeric_limits<double>::infinity();
            if (!std::isfinite(out[i])) r.weighted_sup_finite = false;
            r.weighted_sup = std::max(r.weighted_sup, std::abs(out[i]));
        }
        v.rows.push_back(std::move(out));
    }
    if (!r.weighted_sup_finite) {
        r.weighted_sup = std::numeric_limits<double>::infinity();
        r.note = "weighted sup infinite";
        return r;
    }

    SpaceEstimatorOptions so;
    so.margin = h;
    so.lag_cells = dyadic_lag_cells(n, std::max(0.025, 8.0 * h));
    r.space = holder_exponent_space(v, so);
    if (v.times.size() >= 64) {
        TimeEstimatorOptions to;
        to.x_lo = h;
        to.x_hi = 1.0 - h;
        r.time = holder_exponent_time(v, to);
    } else {
        r.time.note = "fewer than 64 snapshots";
    }
    r.space_consistent = !r.space.defined || r.space.value >= r.predicted.space - tolerance;
    r.time_consistent = !r.time.defined || r.time.value >= r.predicted.time - tolerance;
    return r;
}

HolderReport weighted_holder_field(const Trajectory& traj, const HolderTargets& targets, const WeightFn& psi,
                                   double tolerance) {
    return weighted_holder_field(SampledField::from(traj), targets, psi, tolerance);
}

}  // namespace spdelab

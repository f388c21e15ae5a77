#include "spdelab/weight.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace spdelab {

double rho(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("rho is defined on [0,1] only");
    }
    return std::min(x, 1.0 - x);
}

WeightFn::WeightFn(double K, double delta0) : K_(K), delta0_(delta0), K1_(0.0) {
    if (!(K > 0.0) || !(delta0 > 0.0)) {
        throw std::invalid_argument("weight needs K > 0 and delta0 > 0");
    }
    K1_ = 3.0 * K / (2.0 * delta0);
}

double WeightFn::operator()(double x) const noexcept {
    return 2.0 * std::sinh(K1_ * x) * std::sinh(K1_ * (1.0 - x));
}

double WeightFn::d1(double x) const noexcept { return -2.0 * K1_ * std::sinh(K1_ * (2.0 * x - 1.0)); }

double WeightFn::d2(double x) const noexcept {
    return -4.0 * K1_ * K1_ * std::cosh(K1_ * (2.0 * x - 1.0));
}

double WeightFn::max_value() const noexcept { return std::cosh(K1_) - 1.0; }

WeightFn make_psi(double K, double delta0) { return WeightFn(K, delta0); }

GeneratorCheck check_generator_condition(const WeightFn& psi, const CoefficientField& a,
                                         const CoefficientField& b, const CoefficientField& c,
                                         std::size_t intervals, std::span<const double> times,
                                         double tolerance) {
    if (intervals < 2 || times.empty()) {
        throw std::invalid_argument("generator check needs a grid and at least one time");
    }
    GeneratorCheck out;
    out.c2_sum = 0.0;
    for (double t : times) {
        // c2_norm reports the worst piece; evaluate the sum piece-wise at each time instead.
        const auto piece_c2 = [&](const CoefficientField& f) {
            return CoefficientField::polynomial(f.piece(t).coefficients()).c2_norm();
        };
        out.c2_sum = std::max(out.c2_sum, piece_c2(a) + piece_c2(b) + piece_c2(c));
    }
    out.assumption_holds = out.c2_sum < psi.K();

    const double h = 1.0 / static_cast<double>(intervals);
    const double drift_bound = 3.0 * psi.K();
    double min_a = std::numeric_limits<double>::infinity();
    double max_drift = 0.0;
    for (double t : times) {
        for (std::size_t i = 0; i <= intervals; ++i) {
            const double x = static_cast<double>(i) * h;
            min_a = std::min(min_a, a(t, x));
            max_drift = std::max(max_drift, std::abs(2.0 * a.dx(t, x) - b(t, x)));
        }
    }
    std::ostringstream why;
    if (min_a < psi.delta0()) {
        why << "a >= delta0 violated (min a = " << min_a << ", delta0 = " << psi.delta0() << "); ";
    }
    if (max_drift > drift_bound * (1.0 + 1e-14)) {
        why << "|2 a_x - b| <= 3K violated (max = " << max_drift << ", 3K = " << drift_bound << ")";
    }
    if (!why.str().empty()) {
        out.status = GeneratorStatus::precondition_violated;
        out.worst = std::numeric_limits<double>::quiet_NaN();
        out.detail = why.str();
        return out;
    }

    double worst = -std::numeric_limits<double>::infinity();
    for (double t : times) {
        for (std::size_t i = 1; i < intervals; ++i) {
            const double x = static_cast<double>(i) * h;
            const double v = a(t, x) * psi.d2(x) + (2.0 * a.dx(t, x) - b(t, x)) * psi.d1(x);
            worst = std::max(worst, v);
        }
    }
    out.worst = worst;
    out.status = worst <= tolerance ? GeneratorStatus::pass : GeneratorStatus::fail;
    if (!out.passed()) {
        std::ostringstream msg;
        msg << "a psi'' + (2 a_x - b) psi' reaches " << worst;
        out.detail = msg.str();
    }
    return out;
}

namespace {

double mollifier(double t) noexcept {
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

// Cumulative integral of the mollifier on a uniform table over t in [-1, 1],
// normalized to 1 at t = 1. Between nodes the ramp is a cubic Hermite
// interpolant with the exact derivative.
class RampTable {
public:
    static constexpr std::size_t cells = 2048;

    RampTable() : cdf_(cells + 1, 0.0) {
        using boost::math::quadrature::gauss;
        const double h = 2.0 / static_cast<double>(cells);
        for (std::size_t k = 0; k < cells; ++k) {
            const double lo = -1.0 + static_cast<double>(k) * h;
            cdf_[k + 1] = cdf_[k] + gauss<double, 20>::integrate(mollifier, lo, lo + h);
        }
        total_ = cdf_.back();
        for (double& v : cdf_) v /= total_;
        // Enforce exact antisymmetry about the midpoint.
        for (std::size_t k = 0; k <= cells / 2; ++k) {
            const double sym = 0.5 * (cdf_[k] + 1.0 - cdf_[cells - k]);
            cdf_[k] = sym;
            cdf_[cells - k] = 1.0 - sym;
        }
    }

    double operator()(double tau) const noexcept {
        if (tau <= 0.0) return 0.0;
        if (tau >= 1.0) return 1.0;
        const double t = 2.0 * tau - 1.0;
        const double h = 2.0 / static_cast<double>(cells);
        const double pos = (t + 1.0) / h;
        const auto k = std::min(static_cast<std::size_t>(pos), cells - 1);
        const double s = pos - static_cast<double>(k);
        const double t0 = -1.0 + static_cast<double>(k) * h;
        const double m0 = mollifier(t0) / total_ * h;
        const double m1 = mollifier(t0 + h) / total_ * h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * cdf_[k] + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * cdf_[k + 1] +
               (s3 - s2) * m1;
    }

private:
    std::vector<double> cdf_;
    double total_ = 1.0;
};

const RampTable& ramp_table() {
    static const RampTable table;
    return table;
}

// zeta at unit scale as a function of tau = log(x / scale).
double zeta_log(double tau) noexcept {
    if (tau <= -1.0 || tau >= 2.0) return 0.0;
    if (tau < 0.0) return mollifier_ramp(tau + 1.0);
    if (tau <= 1.0) return 1.0;
    return mollifier_ramp(2.0 - tau);
}

double power_sum_log(double tau, double exponent) noexcept {
    // zeta(e^n x) is nonzero only for tau + n in (-1, 2).
    const int n_lo = static_cast<int>(std::floor(-1.0 - tau)) + 1;
    const int n_hi = static_cast<int>(std::ceil(2.0 - tau)) - 1;
    double s = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double z = zeta_log(tau + n);
        if (z > 0.0) s += std::pow(z, exponent);
    }
    return s;
}

}  // namespace

double mollifier_ramp(double t) noexcept { return ramp_table()(t); }

ZetaFamily::ZetaFamily(double p, double scale, double lower_bound)
    : p_(p), scale_(scale), lower_bound_(lower_bound) {
    if (!(p > 1.0)) throw std::invalid_argument("zeta family needs p > 1");
    if (!(scale > 0.0)) throw std::invalid_argument("zeta scale must be positive");
    if (!(lower_bound > 0.0)) throw std::invalid_argument("zeta lower bound must be positive");
}

double ZetaFamily::support_lo() const noexcept { return scale_ / std::numbers::e; }
double ZetaFamily::support_hi() const noexcept { return scale_ * std::numbers::e * std::numbers::e; }

double ZetaFamily::operator()(double x) const noexcept {
    if (!(x > 0.0)) return 0.0;
    return zeta_log(std::log(x / scale_));
}

double ZetaFamily::member(int n, const WeightFn& psi, double x) const noexcept {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return (*this)(std::exp(static_cast<double>(n)) * psi(x));
}

double ZetaFamily::power_sum(double x, double exponent) const noexcept {
    if (!(x > 0.0)) return 0.0;
    return power_sum_log(std::log(x / scale_), exponent);
}

ZetaFamily make_zeta(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("zeta family needs p > 1");
    // Dense scan of one period in log x, then golden-section refinement.
    constexpr std::size_t scan = 4096;
    double best_tau = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scan; ++i) {
        const double tau = static_cast<double>(i) / scan;
        const double v = power_sum_log(tau, p);
        if (v < best) {
            best = v;
            best_tau = tau;
        }
    }
    const double step = 1.0 / scan;
    double lo = best_tau - step;
    double hi = best_tau + step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = power_sum_log(x1, p);
    double f2 = power_sum_log(x2, p);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = power_sum_log(x1, p);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = power_sum_log(x2, p);
        }
    }
    best = std::min({best, f1, f2});
    // Small relative margin absorbs the table interpolation error of the ramp.
    return ZetaFamily(p, 1.0, best * (1.0 - 1e-9));
}

ComparabilityConstants comparability_constants(const WeightFn& psi, std::size_t intervals) {
    if (intervals < 1001) {
        throw std::invalid_argument("comparability constants need at least 1000 interior points");
    }
    ComparabilityConstants out{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 1; i < intervals; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(intervals);
        const double r = rho(x) / psi(x);
        out.c_lo = std::min(out.c_lo, r);
        out.c_hi = std::max(out.c_hi, r);
    }
    return out;
}

}  // namespace spdelab

#include "spdelab/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace spdelab {

namespace {

void check_kappa(double kappa) {
    if (!(kappa > 0.0 && kappa < 0.5)) throw std::domain_error("kappa must lie in (0, 1/2)");
}

// expm1(z) / z with the removable singularity filled in.
double exprel(double z) noexcept {
    if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z / 6.0);
    return std::expm1(z) / z;
}

// log of int_0^inf t^{-(5-2k)/4} exp(-t x^2 - 1/(4t)) dt, via s = log t.
double log_kernel_integral(double kappa, double x) {
    const double q = (5.0 - 2.0 * kappa) / 4.0;
    const double lx2 = 2.0 * std::log(x);
    const auto phi = [&](double s) { return s * (1.0 - q) - std::exp(s + lx2) - 0.25 * std::exp(-s); };
    const auto dphi = [&](double s) { return (1.0 - q) - std::exp(s + lx2) + 0.25 * std::exp(-s); };

    // dphi is strictly decreasing, so bisection finds the mode.
    double lo = -60.0;
    double hi = 1000.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (dphi(mid) > 0.0 ? lo : hi) = mid;
    }
    const double mode = 0.5 * (lo + hi);
    const double peak = phi(mode);

    const double decay = q - 1.0;  // right tail rate when x^2 e^s is negligible
    const double s_lo = -std::log(4.0 * 800.0 + std::exp(-mode)) - 1.0;
    const double far = std::log(800.0) - lx2;
    const double s_hi = std::min(mode + (39.0 + std::log(1.0 / decay)) / decay,
                                 std::max(far, mode) + std::log1p(std::exp(-std::abs(far - mode))));

    const auto f = [&](double s) { return std::exp(phi(s) - peak); };
    std::vector<double> breaks{s_lo};
    for (double b : {mode - 6.0, mode + 6.0, mode + 40.0}) {
        if (b > breaks.back() && b < s_hi) breaks.push_back(b);
    }
    breaks.push_back(s_hi);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, breaks[k], breaks[k + 1], 8,
                                                                               1e-11);
    }
    return peak + std::log(total);
}

}  // namespace

double log_kernel_R(double kappa, double x) {
    check_kappa(kappa);
    if (x == 0.0 || !std::isfinite(x)) throw std::domain_error("kernel is singular at x = 0");
    const double ax = std::abs(x);
    return -0.5 * (1.0 - 2.0 * kappa) * std::log(ax) + log_kernel_integral(kappa, ax);
}

double kernel_R(double kappa, double x) { return std::exp(log_kernel_R(kappa, x)); }

KernelTable::KernelTable(double kappa, double x_min, double x_max, std::size_t per_decade)
    : kappa_(kappa), log_x_min_(std::log(x_min)), log_step_(std::log(10.0) / static_cast<double>(per_decade)) {
    check_kappa(kappa);
    if (!(x_min > 0.0 && x_max > x_min) || per_decade < 4) {
        throw std::invalid_argument("kernel table needs 0 < x_min < x_max and a usable density");
    }
    const auto count =
        static_cast<std::size_t>(std::ceil((std::log(x_max) - log_x_min_) / log_step_)) + 1;
    abscissae_.resize(count);
    values_.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        abscissae_[k] = std::exp(log_x_min_ + static_cast<double>(k) * log_step_);
        values_[k] = kernel_R(kappa, abscissae_[k]);
    }
    slopes_.resize(count - 1);
    for (std::size_t k = 0; k + 1 < count; ++k) {
        slopes_[k] = (std::log(values_[k + 1]) - std::log(values_[k])) / log_step_;
    }
    head_slope_ = slopes_.front();
    if (!(head_slope_ > -1.0)) throw std::runtime_error("kernel table head is not integrable");

    cum0_.resize(count);
    cum1_.resize(count);
    cum0_[0] = values_[0] * abscissae_[0] / (head_slope_ + 1.0);
    cum1_[0] = values_[0] * abscissae_[0] * abscissae_[0] / (head_slope_ + 2.0);
    for (std::size_t k = 0; k + 1 < count; ++k) {
        const double xk = abscissae_[k];
        const double vk = values_[k];
        cum0_[k + 1] = cum0_[k] + vk * xk * log_step_ * exprel((slopes_[k] + 1.0) * log_step_);
        cum1_[k + 1] = cum1_[k] + vk * xk * xk * log_step_ * exprel((slopes_[k] + 2.0) * log_step_);
    }
}

std::size_t KernelTable::segment(double ay) const noexcept {
    const double pos = (std::log(ay) - log_x_min_) / log_step_;
    const auto last = slopes_.size() - 1;
    if (!(pos > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(pos), last);
}

double KernelTable::value(double y) const {
    const double ay = std::abs(y);
    if (ay == 0.0) throw std::domain_error("kernel is singular at x = 0");
    if (ay >= x_max()) return 0.0;
    if (ay <= x_min()) return values_[0] * std::pow(ay / abscissae_[0], head_slope_);
    const auto k = segment(ay);
    return values_[k] * std::exp(slopes_[k] * std::log(ay / abscissae_[k]));
}

double KernelTable::moment0(double y) const noexcept {
    const double ay = std::abs(y);
    const double sign = y < 0.0 ? -1.0 : 1.0;
    if (ay == 0.0) return 0.0;
    if (ay >= x_max()) return sign * cum0_.back();
    if (ay <= x_min()) return sign * cum0_[0] * std::pow(ay / abscissae_[0], head_slope_ + 1.0);
    const auto k = segment(ay);
    const double l = std::log(ay / abscissae_[k]);
    return sign * (cum0_[k] + values_[k] * abscissae_[k] * l * exprel((slopes_[k] + 1.0) * l));
}

double KernelTable::moment1(double y) const noexcept {
    const double ay = std::abs(y);
    if (ay == 0.0) return 0.0;
    if (ay >= x_max()) return cum1_.back();
    if (ay <= x_min()) return cum1_[0] * std::pow(ay / abscissae_[0], head_slope_ + 2.0);
    const auto k = segment(ay);
    const double l = std::log(ay / abscissae_[k]);
    const double xk = abscissae_[k];
    return cum1_[k] + values_[k] * xk * xk * l * exprel((slopes_[k] + 2.0) * l);
}

std::shared_ptr<const KernelTable> shared_kernel_table(double kappa) {
    static std::mutex mutex;
    static std::map<double, std::shared_ptr<const KernelTable>> cache;
    std::scoped_lock lock(mutex);
    auto& slot = cache[kappa];
    if (!slot) slot = std::make_shared<const KernelTable>(kappa);
    return slot;
}

namespace {

// int_{a}^{b} R(x)^{2r} dx over 0 < a < b by Simpson in log x.
double log_simpson_piece(double kappa, double r, double a, double b) {
    const double ya = std::log(a);
    const double yb = std::log(b);
    const auto intervals = std::max<std::size_t>(
        2, 2 * static_cast<std::size_t>(std::ceil((yb - ya) / std::log(10.0) * 20.0)));
    const double h = (yb - ya) / static_cast<double>(intervals);
    const auto g = [&](double y) { return std::exp(2.0 * r * log_kernel_R(kappa, std::exp(y)) + y); };
    double s = g(ya) + g(yb);
    for (std::size_t i = 1; i < intervals; ++i) {
        s += (i % 2 == 1 ? 4.0 : 2.0) * g(ya + static_cast<double>(i) * h);
    }
    return s * h / 3.0;
}

}  // namespace

IntegrabilityVerdict integrability_test(double kappa, double r, std::span<const double> cutoffs) {
    check_kappa(kappa);
    if (!(r > 1.0)) throw std::invalid_argument("integrability test needs r > 1");
    if (cutoffs.size() < 4) throw std::invalid_argument("integrability ladder needs at least four levels");
    constexpr double outer = 60.0;  // R is below 1e-25 beyond this point
    for (std::size_t j = 0; j < cutoffs.size(); ++j) {
        if (!(cutoffs[j] > 0.0 && cutoffs[j] < outer) || (j > 0 && !(cutoffs[j] < cutoffs[j - 1]))) {
            throw std::invalid_argument("ladder cutoffs must decrease inside (0, 60)");
        }
    }

    IntegrabilityVerdict out;
    out.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    std::vector<double> mass;  // 2 int_{h_j}^{outer} R^{2r}
    double acc = 2.0 * log_simpson_piece(kappa, r, cutoffs[0], outer);
    mass.push_back(acc);
    for (std::size_t j = 1; j < cutoffs.size(); ++j) {
        acc += 2.0 * log_simpson_piece(kappa, r, cutoffs[j], cutoffs[j - 1]);
        mass.push_back(acc);
    }
    for (double m : mass) out.norms.push_back(std::pow(m, 1.0 / (2.0 * r)));

    const std::size_t L = mass.size();
    if (!std::isfinite(mass.back())) {
        out.verdict = Integrability::divergent;
        return out;
    }
    std::vector<double> incr;
    for (std::size_t j = 0; j + 1 < L; ++j) incr.push_back(mass[j + 1] - mass[j]);
    if (std::any_of(incr.begin(), incr.end(), [](double d) { return d < 0.0; })) {
        out.verdict = Integrability::inconclusive;
        return out;
    }
    const double d_last = incr[L - 2];
    const double d_prev = incr[L - 3];
    const double rel_last = (out.norms[L - 1] - out.norms[L - 2]) / out.norms[L - 1];
    if (rel_last < 0.01 && d_last <= d_prev) {
        out.verdict = Integrability::finite;
    } else if (d_last > d_prev) {
        out.verdict = Integrability::divergent;
    } else {
        out.verdict = Integrability::inconclusive;
    }
    return out;
}

IntegrabilityVerdict integrability_test(double kappa, double r) {
    static constexpr double ladder[] = {1e-20, 1e-40, 1e-80, 1e-160, 1e-300};
    return integrability_test(kappa, r, ladder);
}

}  // namespace spdelab

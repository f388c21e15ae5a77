#include "spdelab/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spdelab {

SpaceSpec SpaceSpec::integer(double p, double theta, int order) {
    SpaceSpec s{p, theta, static_cast<double>(order), 0.0};
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::negative(double p, double theta, double kappa) {
    SpaceSpec s{p, theta, -(0.5 + kappa), kappa};
    s.validate();
    return s;
}

bool SpaceSpec::is_negative_order() const noexcept { return gamma < 0.0; }

int SpaceSpec::integer_order() const {
    if (gamma == 0.0 || gamma == 1.0 || gamma == 2.0) return static_cast<int>(gamma);
    throw std::invalid_argument("norm order must be 0, 1 or 2 here");
}

void SpaceSpec::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("summability p must exceed 1");
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    if (is_negative_order()) {
        if (!(kappa > 0.0 && kappa < 0.5)) throw std::invalid_argument("kappa must lie in (0, 1/2)");
        if (std::abs(gamma + 0.5 + kappa) > 1e-12) {
            throw std::invalid_argument("negative order must equal -(1/2 + kappa)");
        }
        return;
    }
    integer_order();
}

void SpaceSpec::validate_for_solver() const {
    validate();
    if (!(theta > 0.0 && theta < p)) throw std::invalid_argument("theta must lie in (0, p)");
}

namespace {

double trapezoid_nonuniform(std::span<const double> x, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
    return s;
}

// D^order u at interior node i.
double derivative(std::span<const double> u, std::size_t i, int order, double h) {
    const std::size_t n = u.size() - 1;
    if (order == 1) {
        if (i == 1) return (-3.0 * u[1] + 4.0 * u[2] - u[3]) / (2.0 * h);
        if (i == n - 1) return (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
        return (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    if (i == 1) return (2.0 * u[1] - 5.0 * u[2] + 4.0 * u[3] - u[4]) / (h * h);
    if (i == n - 1) return (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / (h * h);
    return (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
}

template <class Weight>
double integer_norm_impl(const GridFunction& u, const SpaceSpec& spec, Weight&& weight) {
    spec.validate();
    const int order = spec.integer_order();
    const std::size_t n = u.intervals();
    if (order > 0 && n < 5) throw std::invalid_argument("derivative norms need at least five intervals");
    const double h = 1.0 / static_cast<double>(n);
    const auto v = u.values();
    std::vector<double> integrand(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double w = weight(static_cast<double>(i) * h);
        double s = std::pow(std::abs(v[i]), spec.p);
        double wk = 1.0;
        for (int k = 1; k <= order; ++k) {
            wk *= w;
            s += std::pow(std::abs(wk * derivative(v, i, k, h)), spec.p);
        }
        integrand[i] = s * std::pow(w, spec.theta - 1.0);
    }
    return std::pow(trapezoid(integrand), 1.0 / spec.p);
}

}  // namespace

double weighted_integer_norm(const GridFunction& u, const SpaceSpec& spec) {
    return integer_norm_impl(u, spec, [](double x) { return rho(x); });
}

double weighted_integer_norm(const GridFunction& u, const SpaceSpec& spec, const WeightFn& psi) {
    return integer_norm_impl(u, spec, [&](double x) { return psi(x); });
}

NormLadder weighted_integer_norm_ladder(const std::function<double(double)>& f, const SpaceSpec& spec,
                                        std::span<const std::size_t> intervals) {
    if (intervals.size() < 3) throw std::invalid_argument("norm ladder needs at least three levels");
    NormLadder out;
    out.intervals.assign(intervals.begin(), intervals.end());
    for (std::size_t n : intervals) {
        out.values.push_back(weighted_integer_norm(GridFunction::sample(n, f), spec));
    }
    const std::size_t L = out.values.size();
    const double d_prev = out.values[L - 2] - out.values[L - 3];
    const double d_last = out.values[L - 1] - out.values[L - 2];
    const double rel = std::abs(d_last) / std::max(std::abs(out.values[L - 1]), 1e-300);
    out.infinite = d_prev > 0.0 && d_last > 0.5 * d_prev && rel >= 0.01;
    out.value = out.infinite ? std::numeric_limits<double>::infinity() : out.values.back();
    return out;
}

double dyadic_norm(const GridFunction& u, const SpaceSpec& spec, const ZetaFamily& zeta, const WeightFn& psi) {
    spec.validate();
    if (spec.is_negative_order() || spec.integer_order() != 0) {
        throw std::invalid_argument("dyadic norm is implemented for order 0");
    }
    const std::size_t n = u.intervals();
    const double h = 1.0 / static_cast<double>(n);
    const auto v = u.values();
    std::vector<double> integrand(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i] == 0.0) continue;
        const double w = psi(static_cast<double>(i) * h);
        const double centre = std::log(w / zeta.scale());
        const auto lo = static_cast<int>(std::floor(centre - 2.0));
        const auto hi = static_cast<int>(std::ceil(centre + 1.0));
        double s = 0.0;
        for (int k = lo; k <= hi; ++k) {
            const double z = zeta(std::exp(-static_cast<double>(k)) * w);
            if (z == 0.0) continue;
            s += std::exp(static_cast<double>(k) * (spec.theta - 1.0)) * std::pow(z, spec.p);
        }
        integrand[i] = s * std::pow(std::abs(v[i]), spec.p);
    }
    return std::pow(trapezoid(integrand), 1.0 / spec.p);
}

std::vector<double> bessel_potential(std::span<const double> values, int n, const KernelTable& table,
                                     std::span<const double> points) {
    if (values.size() < 3) throw std::invalid_argument("need at least two cells");
    const std::size_t cells = values.size() - 1;
    const double h = 1.0 / static_cast<double>(cells);
    const double scale = std::exp(static_cast<double>(n));
    const double inv_scale = 1.0 / scale;
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < cells; ++j) {
        if (values[j] != 0.0 || values[j + 1] != 0.0) active.push_back(j);
    }
    std::vector<double> out(points.size(), 0.0);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double x = points[k];
        double acc = 0.0;
        for (std::size_t j : active) {
            const double xj = static_cast<double>(j) * h;
            const double slope = (values[j + 1] - values[j]) / h;
            const double a = inv_scale * (x - (xj + h));
            const double b = inv_scale * (x - xj);
            const double m0 = table.moment0(b) - table.moment0(a);
            const double m1 = table.moment1(b) - table.moment1(a);
            acc += (values[j] + slope * (x - xj)) * m0 - slope * scale * m1;
        }
        out[k] = acc;
    }
    return out;
}

std::vector<double> bessel_output_mesh(std::size_t intervals, int n) {
    const double h = 1.0 / static_cast<double>(intervals);
    const double scale = std::exp(static_cast<double>(n));
    const double reach = std::max(40.0 * scale, 2.0 * h);
    std::vector<double> outside;
    for (double d = std::min(h, scale); d < reach * 1.2; d *= 1.2) outside.push_back(d);
    std::vector<double> mesh;
    mesh.reserve(intervals + 1 + 2 * outside.size());
    for (auto it = outside.rbegin(); it != outside.rend(); ++it) mesh.push_back(-*it);
    for (std::size_t i = 0; i <= intervals; ++i) mesh.push_back(static_cast<double>(i) * h);
    for (double d : outside) mesh.push_back(1.0 + d);
    return mesh;
}

double bessel_negative_norm(const GridFunction& u, const SpaceSpec& spec, const ZetaFamily& zeta,
                            const WeightFn& psi, const KernelTable& table) {
    spec.validate();
    if (!spec.is_negative_order()) throw std::invalid_argument("Bessel norm needs a negative order");
    if (table.kappa() != spec.kappa) throw std::invalid_argument("kernel table kappa does not match the norm");
    const std::size_t n = u.intervals();
    const double h = 1.0 / static_cast<double>(n);
    const auto v = u.values();
    if (u.sup_norm() == 0.0) return 0.0;

    std::vector<double> weight(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) weight[i] = psi(static_cast<double>(i) * h);
    const double w_min = std::min(weight[1], weight[n - 1]);
    const auto lo = static_cast<int>(std::floor(std::log(w_min / zeta.scale()) - 2.0));
    const auto hi = static_cast<int>(std::ceil(std::log(psi.max_value() / zeta.scale()) + 1.0));

    double total = 0.0;
    std::vector<double> local(n + 1, 0.0);
    for (int k = lo; k <= hi; ++k) {
        const double shrink = std::exp(-static_cast<double>(k));
        bool any = false;
        for (std::size_t i = 1; i < n; ++i) {
            local[i] = zeta(shrink * weight[i]) * v[i];
            any = any || local[i] != 0.0;
        }
        if (!any) continue;
        const auto mesh = bessel_output_mesh(n, k);
        auto conv = bessel_potential(local, k, table, mesh);
        for (double& c : conv) c = std::pow(std::abs(c), spec.p);
        total += std::exp(static_cast<double>(k) * (spec.theta - 1.0)) * trapezoid_nonuniform(mesh, conv);
    }
    return std::pow(total, 1.0 / spec.p);
}

double weighted_sup(std::span<const double> values, double nu, const WeightFn& psi) {
    if (values.size() < 3) throw std::invalid_argument("need at least two cells");
    const std::size_t n = values.size() - 1;
    const double h = 1.0 / static_cast<double>(n);
    double out = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        if (values[i] == 0.0) continue;
        const double denom = std::pow(psi(static_cast<double>(i) * h), nu);
        if (denom == 0.0 || !std::isfinite(values[i])) return std::numeric_limits<double>::infinity();
        out = std::max(out, std::abs(values[i]) / denom);
    }
    return out;
}

double weighted_sup(const GridFunction& u, double nu, const WeightFn& psi) {
    return weighted_sup(u.values(), nu, psi);
}

}  // namespace spdelab

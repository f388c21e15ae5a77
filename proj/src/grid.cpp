#include "spdelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spdelab {

UniformGrid::UniformGrid(std::size_t intervals) : intervals_(intervals) {
    if (intervals < 2) {
        throw std::invalid_argument("grid needs at least two intervals");
    }
}

GridFunction::GridFunction(std::size_t intervals) : values_(UniformGrid(intervals).nodes(), 0.0) {}

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 3) {
        throw std::invalid_argument("grid function needs at least three nodes");
    }
    if (values_.front() != 0.0 || values_.back() != 0.0) {
        throw std::invalid_argument("grid function violates the zero Dirichlet condition");
    }
}

GridFunction GridFunction::sample(std::size_t intervals, const std::function<double(double)>& f) {
    GridFunction u(intervals);
    const UniformGrid grid(intervals);
    for (std::size_t i = 1; i < intervals; ++i) {
        u.values_[i] = f(grid.node(i));
    }
    return u;
}

double GridFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::min_value() const noexcept {
    return *std::min_element(values_.begin(), values_.end());
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (other.size() != size()) {
        throw std::invalid_argument("grid function size mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double alpha) noexcept {
    for (double& v : values_) v *= alpha;
    return *this;
}

double trapezoid(std::span<const double> f) {
    if (f.size() < 2) throw std::invalid_argument("trapezoid needs two samples");
    const double h = 1.0 / static_cast<double>(f.size() - 1);
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

double trapezoid_inner(std::span<const double> f, std::span<const double> g) {
    if (f.size() != g.size() || f.size() < 2) {
        throw std::invalid_argument("inner product needs equal-length samples");
    }
    const double h = 1.0 / static_cast<double>(f.size() - 1);
    double s = 0.5 * (f.front() * g.front() + f.back() * g.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * g[i];
    return s * h;
}

}  // namespace spdelab

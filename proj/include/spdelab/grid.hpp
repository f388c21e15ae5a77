#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spdelab {

/// Uniform mesh x_i = i/N, i = 0..N, on the closed unit interval.
class UniformGrid {
public:
    explicit UniformGrid(std::size_t intervals);

    std::size_t intervals() const noexcept { return intervals_; }
    std::size_t nodes() const noexcept { return intervals_ + 1; }
    std::size_t interior_nodes() const noexcept { return intervals_ - 1; }
    double spacing() const noexcept { return 1.0 / static_cast<double>(intervals_); }
    double node(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(intervals_);
    }

    bool operator==(const UniformGrid&) const = default;

private:
    std::size_t intervals_;
};

/// Real values on a UniformGrid with homogeneous Dirichlet data.
///
/// The first and last entries are always exactly zero; constructors that
/// receive explicit boundary values reject anything else.
class GridFunction {
public:
    explicit GridFunction(std::size_t intervals);
    explicit GridFunction(std::vector<double> values);

    /// Samples f at every node and pins the two boundary nodes to zero.
    static GridFunction sample(std::size_t intervals, const std::function<double(double)>& f);

    std::size_t intervals() const noexcept { return values_.size() - 1; }
    UniformGrid grid() const { return UniformGrid(intervals()); }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Interior entries only; the boundary stays pinned.
    std::span<double> interior() noexcept { return {values_.data() + 1, values_.size() - 2}; }
    std::span<const double> interior() const noexcept {
        return {values_.data() + 1, values_.size() - 2};
    }

    double sup_norm() const noexcept;
    double min_value() const noexcept;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator*=(double alpha) noexcept;
    friend GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
    friend GridFunction operator*(double alpha, GridFunction u) { return u *= alpha; }

    bool operator==(const GridFunction&) const = default;

private:
    std::vector<double> values_;
};

/// Composite trapezoid rule for the L2(0,1) inner product of two grid samples.
double trapezoid_inner(std::span<const double> f, std::span<const double> g);

/// Composite trapezoid rule for the integral of samples on a uniform grid over [0,1].
double trapezoid(std::span<const double> f);

}  // namespace spdelab

#pragma once

#include "spdelab/grid.hpp"
#include "spdelab/kernel.hpp"
#include "spdelab/weight.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spdelab {

/// Parameters (p, theta, gamma, kappa) of a weighted Sobolev norm H^gamma_{p,theta}.
///
/// gamma is one of 0, 1, 2 or the negative order -(1/2 + kappa).
struct SpaceSpec {
    double p = 2.0;
    double theta = 1.0;
    double gamma = 0.0;
    double kappa = 0.0;  ///< only meaningful for the negative order

    static SpaceSpec integer(double p, double theta, int order);
    static SpaceSpec negative(double p, double theta, double kappa);

    bool is_negative_order() const noexcept;
    /// 0, 1 or 2; throws for the negative order.
    int integer_order() const;

    void validate() const;
    /// Additionally requires 0 < theta < p.
    void validate_for_solver() const;
};

enum class DerivativeWeight { rho, psi };

/// (sum_{k <= gamma} int |w^k D^k u|^p w^{theta-1} dx)^{1/p} with w = rho,
/// by composite trapezoid over the nodes.
///
/// Derivatives use centered stencils, with second-order one-sided stencils at
/// the first and last interior node. The integrand is set to zero at the two
/// boundary nodes.
double weighted_integer_norm(const GridFunction& u, const SpaceSpec& spec);
/// Same with psi as the weight.
double weighted_integer_norm(const GridFunction& u, const SpaceSpec& spec, const WeightFn& psi);

struct NormLadder {
    std::vector<std::size_t> intervals;
    std::vector<double> values;
    bool infinite = false;
    double value = 0.0;  ///< finest level, +inf when the ladder diverges
};

/// weighted_integer_norm of f sampled on each level of a refinement ladder
/// (at least three levels). The result is infinite when the values keep
/// growing: increments that do not contract by more than half per level and
/// a last relative change of at least 1%.
NormLadder weighted_integer_norm_ladder(const std::function<double(double)>& f, const SpaceSpec& spec,
                                        std::span<const std::size_t> intervals);

/// Dyadic norm for gamma = 0:
/// (sum_n e^{n(theta-1)} int |zeta(e^{-n} psi(x)) u(x)|^p dx)^{1/p}.
///
/// Only the finitely many n whose band meets a grid node contribute, so the
/// sum is exact up to quadrature.
double dyadic_norm(const GridFunction& u, const SpaceSpec& spec, const ZetaFamily& zeta, const WeightFn& psi);

/// conv(x) = int R(e^{-n}(x - y)) w(y) e^{-n} dy for the piecewise linear
/// interpolant w of `values` on the uniform grid, evaluated at each point.
///
/// Each cell is integrated exactly against the table interpolant of R through
/// its cumulative moments, including the singular cell.
std::vector<double> bessel_potential(std::span<const double> values, int n, const KernelTable& table,
                                     std::span<const double> points);

/// Points used to integrate |conv|^p over the real line at dyadic level n:
/// the grid nodes plus geometrically spaced points on both sides of [0,1].
std::vector<double> bessel_output_mesh(std::size_t intervals, int n);

/// Negative-order dyadic norm with gamma = -(1/2 + kappa), normalized with
/// c(kappa) = 1.
double bessel_negative_norm(const GridFunction& u, const SpaceSpec& spec, const ZetaFamily& zeta,
                            const WeightFn& psi, const KernelTable& table);

/// max over interior nodes of |u| / psi^nu; +inf when psi^nu underflows at a
/// node where u is nonzero.
double weighted_sup(std::span<const double> values, double nu, const WeightFn& psi);
double weighted_sup(const GridFunction& u, double nu, const WeightFn& psi);

}  // namespace spdelab

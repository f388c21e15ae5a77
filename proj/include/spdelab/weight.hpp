#pragma once

#include "spdelab/coefficients.hpp"

#include <cstddef>
#include <span>
#include <string>

namespace spdelab {

/// Distance to the boundary of (0,1): min(x, 1-x).
double rho(double x);

/// Boundary weight psi(x) = cosh(K1) - cosh(K1 (2x - 1)) with K1 = 3K / (2 delta0).
///
/// psi vanishes at both ends, is positive and strictly concave inside, and is
/// comparable to rho. Values are evaluated through the product form
/// 2 sinh(K1 x) sinh(K1 (1-x)), which avoids cancellation next to the boundary.
class WeightFn {
public:
    WeightFn(double K, double delta0);

    double K() const noexcept { return K_; }
    double delta0() const noexcept { return delta0_; }
    double K1() const noexcept { return K1_; }

    double operator()(double x) const noexcept;
    double d1(double x) const noexcept;
    double d2(double x) const noexcept;

    /// psi(1/2) = cosh(K1) - 1, the maximum over the interval.
    double max_value() const noexcept;

private:
    double K_;
    double delta0_;
    double K1_;
};

WeightFn make_psi(double K, double delta0);

enum class GeneratorStatus { pass, fail, precondition_violated };

struct GeneratorCheck {
    GeneratorStatus status = GeneratorStatus::pass;
    /// max of a psi'' + (2 a_x - b) psi' over the sampled (t, x); NaN when not evaluated.
    double worst = 0.0;
    /// sampled |a|_C2 + |b|_C2 + |c|_C2 and whether it stays below K.
    double c2_sum = 0.0;
    bool assumption_holds = true;
    std::string detail;

    bool passed() const noexcept { return status == GeneratorStatus::pass; }
};

/// Evaluates a psi'' + (2 a_x - b) psi' at every interior node of an
/// `intervals`-cell grid and every sample time.
///
/// The operative preconditions are a >= delta0 and |2 a_x - b| <= 3K; a
/// violation of either is reported as precondition_violated without
/// evaluating the condition. The full C2 assumption on (a, b, c) is reported
/// alongside but does not gate the check.
GeneratorCheck check_generator_condition(const WeightFn& psi, const CoefficientField& a,
                                         const CoefficientField& b, const CoefficientField& c,
                                         std::size_t intervals, std::span<const double> times,
                                         double tolerance = 1e-12);

/// Dyadic bump family: a smooth zeta on (0, inf), 1 on [s, e s], supported on
/// [s/e, e^2 s], with transitions given by the normalized integral of the
/// exp(-1/(1-t^2)) mollifier.
class ZetaFamily {
public:
    ZetaFamily(double p, double scale, double lower_bound);

    double p() const noexcept { return p_; }
    double scale() const noexcept { return scale_; }
    double support_lo() const noexcept;
    double support_hi() const noexcept;

    /// Certified c with sum_n zeta^p(e^n x) >= c for all x > 0.
    double lower_bound() const noexcept { return lower_bound_; }

    double operator()(double x) const noexcept;
    /// zeta_n(x) = zeta(e^n psi(x)) for x in (0,1), zero outside.
    double member(int n, const WeightFn& psi, double x) const noexcept;
    /// sum over n of zeta^exponent(e^n x).
    double power_sum(double x, double exponent) const noexcept;

private:
    double p_;
    double scale_;
    double lower_bound_;
};

/// Builds the bump at unit scale and certifies its lower-bound constant by
/// minimizing the power sum over one multiplicative period.
ZetaFamily make_zeta(double p);

/// Smooth monotone ramp on [0,1]: 0 at 0, 1 at 1, with r(t) + r(1-t) = 1.
double mollifier_ramp(double t) noexcept;

struct ComparabilityConstants {
    double c_lo;  ///< min rho/psi over interior nodes
    double c_hi;  ///< max rho/psi over interior nodes
};

/// Sampled bounds of rho/psi; needs at least 1000 interior nodes.
ComparabilityConstants comparability_constants(const WeightFn& psi, std::size_t intervals);

}  // namespace spdelab

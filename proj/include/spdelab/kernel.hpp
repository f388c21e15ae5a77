#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace spdelab {

/// Bessel potential kernel of order 1/2 + kappa:
///   R(x) = |x|^{-(1-2 kappa)/2} * int_0^inf t^{-(5-2 kappa)/4} exp(-t x^2 - 1/(4t)) dt.
///
/// The integral is evaluated by adaptive Gauss-Kronrod quadrature in s = log t,
/// where the integrand decays doubly exponentially on the left and at least
/// exponentially on the right. Relative accuracy is about 1e-10.
double kernel_R(double kappa, double x);

/// log R(x), usable where R itself over- or underflows.
double log_kernel_R(double kappa, double x);

/// R sampled on a log-spaced mesh over [x_min, x_max] with closed-form
/// moments of its log-log linear interpolant.
///
/// Below x_min the kernel is continued by the power law through the two
/// nearest samples (the local singular asymptote, integrated analytically);
/// beyond x_max it is taken as zero. R is even, so only |y| is stored.
class KernelTable {
public:
    explicit KernelTable(double kappa, double x_min = 1e-10, double x_max = 60.0,
                         std::size_t per_decade = 1000);

    double kappa() const noexcept { return kappa_; }
    double x_min() const noexcept { return abscissae_.front(); }
    double x_max() const noexcept { return abscissae_.back(); }
    std::span<const double> abscissae() const noexcept { return abscissae_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Interpolated R(y), y != 0.
    double value(double y) const;
    /// int_0^y R(s) ds, odd in y.
    double moment0(double y) const noexcept;
    /// int_0^y s R(s) ds, even in y.
    double moment1(double y) const noexcept;

private:
    std::size_t segment(double ay) const noexcept;

    double kappa_;
    double log_x_min_;
    double log_step_;
    std::vector<double> abscissae_;
    std::vector<double> values_;
    std::vector<double> slopes_;  ///< local power-law exponent on each segment
    std::vector<double> cum0_;    ///< int_0^{x_k} of the interpolant
    std::vector<double> cum1_;
    double head_slope_;
};

/// Process-wide cache of tables with default resolution, keyed by kappa.
std::shared_ptr<const KernelTable> shared_kernel_table(double kappa);

enum class Integrability { finite, divergent, inconclusive };

struct IntegrabilityVerdict {
    Integrability verdict = Integrability::inconclusive;
    std::vector<double> cutoffs;  ///< inner cutoffs h_j of the ladder
    std::vector<double> norms;    ///< ||R||_{L_2r(|x| > h_j)}
};

/// Decides whether ||R||_{L_{2r}(R)} is finite from the truncated norms on a
/// ladder of near-origin cutoffs (at least four levels, decreasing).
///
/// finite: the last successive relative change is below 1% and the
/// increments shrink. divergent: the increments do not shrink. Anything else,
/// including a non-monotone ladder, is inconclusive.
IntegrabilityVerdict integrability_test(double kappa, double r, std::span<const double> cutoffs);

/// Default ladder {1e-20, 1e-40, 1e-80, 1e-160, 1e-300}.
IntegrabilityVerdict integrability_test(double kappa, double r);

}  // namespace spdelab

#pragma once

#include "spdelab/grid.hpp"
#include "spdelab/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace spdelab {

/// eta_k(x) = sqrt(2) sin(k pi x), the Dirichlet sine basis of L2(0,1).
double basis_eta(int k, double x);

/// sup over [0,1] of |eta_k|, identical for every k.
inline constexpr double kEtaSup = 1.4142135623730951;

/// Truncated sine basis sampled on a uniform grid.
///
/// Modes above N-1 alias on an N-cell grid, so modes <= intervals - 1.
class BasisSpec {
public:
    BasisSpec(std::size_t modes, std::size_t intervals);

    std::size_t modes() const noexcept { return modes_; }
    std::size_t intervals() const noexcept { return intervals_; }
    double eta(int k, double x) const { return basis_eta(k, x); }

private:
    std::size_t modes_;
    std::size_t intervals_;
};

struct NoiseIncrement {
    std::vector<double> dw;  ///< one N(0, dt) draw per mode
    double dt = 0.0;
    std::uint64_t step_index = 0;
};

/// Draws independent N(0, dt) increments for every mode from the current
/// sub-stream of `rng` and advances it by one.
NoiseIncrement sample_increments(const BasisSpec& spec, double dt, RngStream& rng);

/// In-place variant reusing the increment buffer.
void sample_increments_into(NoiseIncrement& out, const BasisSpec& spec, double dt, RngStream& rng);

/// Evaluates x_i -> sum_k eta_k(x_i) dw_k on the grid through a type-I discrete
/// sine transform. Owns its transform plan; one instance per thread.
class NoiseSynthesizer {
public:
    explicit NoiseSynthesizer(const BasisSpec& spec);
    ~NoiseSynthesizer();
    NoiseSynthesizer(const NoiseSynthesizer&) = delete;
    NoiseSynthesizer& operator=(const NoiseSynthesizer&) = delete;
    NoiseSynthesizer(NoiseSynthesizer&&) noexcept;
    NoiseSynthesizer& operator=(NoiseSynthesizer&&) noexcept;

    /// Writes the field into `out` (all N+1 nodes, boundary nodes set to 0).
    void synthesize(std::span<const double> dw, std::span<double> out);

private:
    struct Plan;
    std::unique_ptr<Plan> plan_;
    std::size_t modes_;
    std::size_t intervals_;
};

GridFunction noise_field(const NoiseIncrement& inc, const BasisSpec& spec, const UniformGrid& grid);

}  // namespace spdelab

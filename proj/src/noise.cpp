#include "spdelab/noise.hpp"

#include <boost/random/normal_distribution.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace spdelab {

double basis_eta(int k, double x) {
    if (k < 1) throw std::invalid_argument("basis index starts at 1");
    return std::numbers::sqrt2 * std::sin(static_cast<double>(k) * std::numbers::pi * x);
}

BasisSpec::BasisSpec(std::size_t modes, std::size_t intervals) : modes_(modes), intervals_(intervals) {
    if (intervals < 2) throw std::invalid_argument("basis grid needs at least two intervals");
    if (modes < 1 || modes > intervals - 1) {
        throw std::invalid_argument("mode count must lie in [1, intervals - 1]");
    }
}

void sample_increments_into(NoiseIncrement& out, const BasisSpec& spec, double dt, RngStream& rng) {
    if (dt < 0.0) throw std::invalid_argument("time step must be nonnegative");
    out.dw.resize(spec.modes());
    out.dt = dt;
    out.step_index = rng.counter();
    if (dt == 0.0) {
        std::fill(out.dw.begin(), out.dw.end(), 0.0);
    } else {
        auto engine = rng.engine();
        boost::random::normal_distribution<double> normal(0.0, 1.0);
        const double scale = std::sqrt(dt);
        for (double& w : out.dw) w = scale * normal(engine);
    }
    rng.advance();
}

NoiseIncrement sample_increments(const BasisSpec& spec, double dt, RngStream& rng) {
    NoiseIncrement out;
    sample_increments_into(out, spec, dt, rng);
    return out;
}

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct NoiseSynthesizer::Plan {
    explicit Plan(std::size_t n) : size(n) {
        in = fftw_alloc_real(n);
        out = fftw_alloc_real(n);
        std::scoped_lock lock(planner_mutex());
        // ESTIMATE keeps the algorithm choice, and so the roundoff, reproducible.
        plan = fftw_plan_r2r_1d(static_cast<int>(n), in, out, FFTW_RODFT00, FFTW_ESTIMATE);
        if (plan == nullptr) throw std::runtime_error("could not create sine transform plan");
    }
    ~Plan() {
        {
            std::scoped_lock lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(out);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    std::size_t size;
    double* in = nullptr;
    double* out = nullptr;
    fftw_plan plan = nullptr;
};

NoiseSynthesizer::NoiseSynthesizer(const BasisSpec& spec)
    : plan_(std::make_unique<Plan>(spec.intervals() - 1)), modes_(spec.modes()), intervals_(spec.intervals()) {}

NoiseSynthesizer::~NoiseSynthesizer() = default;
NoiseSynthesizer::NoiseSynthesizer(NoiseSynthesizer&&) noexcept = default;
NoiseSynthesizer& NoiseSynthesizer::operator=(NoiseSynthesizer&&) noexcept = default;

void NoiseSynthesizer::synthesize(std::span<const double> dw, std::span<double> out) {
    if (dw.size() != modes_ || out.size() != intervals_ + 1) {
        throw std::invalid_argument("noise synthesis size mismatch");
    }
    const std::size_t n = plan_->size;
    std::copy(dw.begin(), dw.end(), plan_->in);
    std::fill(plan_->in + modes_, plan_->in + n, 0.0);
    fftw_execute(plan_->plan);
    // RODFT00 returns 2 sum_k X_k sin(pi k i / N); eta_k carries sqrt(2).
    constexpr double scale = 0.5 * std::numbers::sqrt2;
    out.front() = 0.0;
    out.back() = 0.0;
    for (std::size_t i = 0; i < n; ++i) out[i + 1] = scale * plan_->out[i];
}

GridFunction noise_field(const NoiseIncrement& inc, const BasisSpec& spec, const UniformGrid& grid) {
    if (grid.intervals() != spec.intervals()) {
        throw std::invalid_argument("noise grid does not match the basis grid");
    }
    NoiseSynthesizer synth(spec);
    std::vector<double> values(grid.nodes());
    synth.synthesize(inc.dw, values);
    return GridFunction(std::move(values));
}

}  // namespace spdelab

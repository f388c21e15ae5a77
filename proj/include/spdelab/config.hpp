#pragma once

#include "spdelab/estimators.hpp"
#include "spdelab/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spdelab {

/// One experiment: problem, scheme, estimation targets and ensemble settings.
///
/// Polynomial coefficient lists are in increasing degree and constant in time.
struct ExperimentConfig {
    // problem
    std::vector<double> a{1.0};
    std::vector<double> b{};
    std::vector<double> c{};
    std::vector<double> xi{1.0};
    NoiseKind noise = NoiseKind::multiplicative;
    double lambda = 0.25;
    std::string u0 = "parabola";  ///< parabola | sine | zero | bump
    double T = 0.1;
    double delta0 = 1.0;
    double K = 2.0;

    // scheme
    std::size_t N = 256;
    double dt = 0.0;           ///< 0 selects dx^2/4
    std::size_t K_modes = 0;   ///< 0 selects N - 1
    double m = 10.0;
    std::size_t snapshots = 257;

    // estimation
    double kappa = 0.3;
    double p = 32.0;
    double theta = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    double margin = 0.1;
    double boundary_lo = 0.0;  ///< 0 selects 2 dx
    double boundary_hi = 0.05;
    std::vector<std::size_t> space_lags{};  ///< cells; empty selects the dyadic default
    std::vector<std::size_t> time_lags{1, 2, 4, 8, 16};
    IncrementStatistic statistic = IncrementStatistic::median;
    double tolerance = 0.05;

    // ensemble
    std::size_t paths = 64;
    std::uint64_t seed = 1;
    std::size_t workers = 0;  ///< 0 selects the available parallelism
    std::string out = "spdelab_out";
    bool persist = true;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Names accepted by preset_config.
std::vector<std::string> preset_names();

/// heat | additive | lambda025 | variable-coeff.
ExperimentConfig preset_config(std::string_view name);

/// Every violated constraint of the configuration; empty when it is usable.
std::vector<std::string> config_violations(const ExperimentConfig& cfg);

/// Parses `key = value` lines ('#' starts a comment). A `preset` key selects
/// the starting point, whatever its position; every other key overrides it.
/// alpha and beta, when absent, are placed at 1/3 and 2/3 of their admissible
/// interval. Throws ValidationError listing every parse error (with line
/// numbers) or, failing that, every violated constraint.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Writes every key explicitly, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

GridFunction initial_condition(std::string_view name, std::size_t intervals);
SpdeProblem make_problem(const ExperimentConfig& cfg);
/// dt is the largest step not above the nominal one (dt, or dx^2/4) that fits a
/// whole number of times into every snapshot gap.
SchemeParams make_scheme(const ExperimentConfig& cfg);
HolderTargets make_targets(const ExperimentConfig& cfg);

std::string_view to_string(IncrementStatistic s);
std::string_view to_string(NoiseKind k);

}  // namespace spdelab

#pragma once

#include "spdelab/config.hpp"
#include "spdelab/estimators.hpp"
#include "spdelab/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace spdelab {

inline constexpr int kReportSchemaVersion = 1;

struct Summary {
    std::size_t count = 0;
    double median = std::numeric_limits<double>::quiet_NaN();
    double q25 = std::numeric_limits<double>::quiet_NaN();
    double q75 = std::numeric_limits<double>::quiet_NaN();
};

Summary summarize(const std::vector<double>& values);

struct PathRecord {
    std::uint64_t path_index = 0;
    bool diverged = false;
    bool failed = false;
    std::string error;
    bool cutoff_active = false;
    double first_cutoff_time = std::numeric_limits<double>::quiet_NaN();
    double running_min = 0.0;
    double negativity_tol = 0.0;
    bool max_principle_pass = true;
    ExponentEstimate space;
    ExponentEstimate time;
    BoundaryDecayEstimate boundary;
    HolderReport weighted;

    bool excluded() const noexcept { return diverged || failed; }
};

struct EnsembleReport {
    ExperimentConfig config;
    std::vector<PathRecord> paths;  ///< ordered by path index

    std::size_t excluded = 0;  ///< diverged or failed paths
    bool valid = true;         ///< false when more than 5% of the paths are excluded
    std::string note;

    Summary space;
    Summary time;
    Summary boundary;
    Summary weighted_space;
    Summary weighted_time;
    Summary undershoot;  ///< running minima of the included paths
    double worst_undershoot = 0.0;
    double cutoff_active_fraction = std::numeric_limits<double>::quiet_NaN();
    double max_principle_pass_fraction = std::numeric_limits<double>::quiet_NaN();
    double weighted_sup_finite_fraction = std::numeric_limits<double>::quiet_NaN();
};

struct EnsembleTiming {
    std::size_t workers = 0;
    double wall_seconds = 0.0;
    double paths_per_second = 0.0;
};

/// Runs every estimator of the configuration on one trajectory. Estimator
/// failures are recorded in the estimate notes, never thrown.
PathRecord analyze_path(const Trajectory& traj, const ExperimentConfig& cfg);

/// Folds per-path records (sorted by path index) into the aggregate report.
EnsembleReport aggregate(const ExperimentConfig& cfg, std::vector<PathRecord> records);

/// Simulates cfg.paths trajectories with RngStream(cfg.seed, i) on a worker
/// pool, persists each one under <out>/trajectories when cfg.persist is set,
/// analyzes it and aggregates. Per-path failures are recorded; the report is
/// identical for any worker count. Throws ValidationError for a bad config.
EnsembleReport run_ensemble(const ExperimentConfig& cfg, EnsembleTiming* timing = nullptr);

/// Simulates and persists every path without analyzing it. Returns one entry
/// per path: empty on success, the failure message otherwise.
std::vector<std::string> simulate_ensemble(const ExperimentConfig& cfg, EnsembleTiming* timing = nullptr);

/// Re-runs the estimators on persisted trajectories.
EnsembleReport estimate_directory(const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// JSON text of the report. Contains no timing, so equal inputs give equal bytes.
std::string report_json(const EnsembleReport& report);
EnsembleReport parse_report(std::string_view json);

/// <dir>/report.json and, when given, <dir>/timing.json.
void write_report(const EnsembleReport& report, const std::filesystem::path& dir,
                  const EnsembleTiming* timing = nullptr);
EnsembleReport read_report(const std::filesystem::path& file);

/// Writes increments.csv (log lag against log increment per estimator),
/// boundary_decay.csv (log rho against log envelope) and histograms.csv
/// (exponent bins over the included paths).
void emit_plot_data(const EnsembleReport& report, const std::filesystem::path& dir);

}  // namespace spdelab

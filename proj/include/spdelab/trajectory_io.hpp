#pragma once

#include "spdelab/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spdelab {

inline constexpr int kTrajectorySchemaVersion = 1;

/// path_000042.csv
std::string trajectory_filename(std::uint64_t path_index);

/// Line 1 is a JSON object with the metadata and `schema_version`; line 2 is
/// the header `t,u_0,...,u_N`; every further line is one snapshot written
/// with 17 significant digits, so reading reproduces the values exactly.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& file);
Trajectory read_trajectory(const std::filesystem::path& file);

/// Every trajectory file in `dir`, ordered by path index.
std::vector<Trajectory> read_trajectory_dir(const std::filesystem::path& dir);

}  // namespace spdelab

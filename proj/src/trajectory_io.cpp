#include "spdelab/trajectory_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spdelab {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json meta_json(const TrajectoryMeta& m) {
    nlohmann::ordered_json j;
    j["schema_version"] = kTrajectorySchemaVersion;
    j["master_seed"] = m.master_seed;
    j["path_index"] = m.path_index;
    j["dt"] = m.dt;
    j["intervals"] = m.intervals;
    j["modes"] = m.modes;
    j["cutoff"] = m.cutoff;
    j["T"] = m.T;
    j["lambda"] = m.lambda;
    j["negativity_tol"] = m.negativity_tol;
    j["diverged"] = m.diverged;
    j["cutoff_active"] = m.cutoff_active;
    j["first_cutoff_time"] = std::isnan(m.first_cutoff_time) ? nlohmann::ordered_json() : nlohmann::ordered_json(m.first_cutoff_time);
    j["steps"] = m.steps;
    j["running_min"] = m.running_min;
    j["diagnostic"] = m.diagnostic;
    return j;
}

TrajectoryMeta meta_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != kTrajectorySchemaVersion) {
        throw std::runtime_error("unsupported trajectory schema_version");
    }
    TrajectoryMeta m;
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.path_index = j.at("path_index").get<std::uint64_t>();
    m.dt = j.at("dt").get<double>();
    m.intervals = j.at("intervals").get<std::size_t>();
    m.modes = j.at("modes").get<std::size_t>();
    m.cutoff = j.at("cutoff").get<double>();
    m.T = j.at("T").get<double>();
    m.lambda = j.at("lambda").get<double>();
    m.negativity_tol = j.at("negativity_tol").get<double>();
    m.diverged = j.at("diverged").get<bool>();
    m.cutoff_active = j.at("cutoff_active").get<bool>();
    const auto& fct = j.at("first_cutoff_time");
    m.first_cutoff_time = fct.is_null() ? std::nan("") : fct.get<double>();
    m.steps = j.at("steps").get<std::size_t>();
    m.running_min = j.at("running_min").get<double>();
    m.diagnostic = j.at("diagnostic").get<std::string>();
    return m;
}

}  // namespace

std::string trajectory_filename(std::uint64_t path_index) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "path_%06llu.csv", static_cast<unsigned long long>(path_index));
    return buf;
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << meta_json(traj.meta).dump() << '\n';
    const std::size_t n = traj.intervals();
    out << 't';
    for (std::size_t i = 0; i <= n; ++i) out << ",u_" << i;
    out << '\n';
    for (const auto& s : traj.snapshots) {
        out << fmt17(s.t);
        for (double v : s.u.values()) out << ',' << fmt17(v);
        out << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + file.string());
}

Trajectory read_trajectory(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(file.string() + ": missing metadata line");
    Trajectory traj;
    try {
        traj.meta = meta_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(file.string() + ": bad metadata: " + e.what());
    }
    if (!std::getline(in, line)) throw std::runtime_error(file.string() + ": missing header line");
    const std::size_t width = traj.meta.intervals + 1;
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(width + 1);
        const char* p = line.c_str();
        while (*p) {
            char* end = nullptr;
            row.push_back(std::strtod(p, &end));
            if (end == p) throw std::runtime_error(file.string() + ": bad number on line " + std::to_string(lineno));
            p = end;
            if (*p == ',') ++p;
        }
        if (row.size() != width + 1) {
            throw std::runtime_error(file.string() + ": wrong column count on line " + std::to_string(lineno));
        }
        const double t = row.front();
        row.erase(row.begin());
        traj.snapshots.push_back({t, GridFunction(std::move(row))});
    }
    return traj;
}

std::vector<Trajectory> read_trajectory_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("path_", 0) == 0 && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::vector<Trajectory> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(read_trajectory(f));
    std::sort(out.begin(), out.end(),
              [](const Trajectory& a, const Trajectory& b) { return a.meta.path_index < b.meta.path_index; });
    return out;
}

}  // namespace spdelab

#include "spdelab/trajectory_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace spdelab;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

Trajectory sample_trajectory(std::uint64_t index) {
    SpdeProblem p;
    p.lambda = 0.25;
    p.T = 0.002;
    p.u0 = GridFunction::sample(32, [](double x) { return 4 * x * (1 - x); });
    SchemeParams s;
    s.intervals = 32;
    s.snapshot_times = uniform_snapshot_times(p.T, 5);
    return simulate_path(p, s, RngStream(42, index));
}

void expect_same(const Trajectory& a, const Trajectory& b) {
    ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
    for (std::size_t j = 0; j < a.snapshots.size(); ++j) {
        EXPECT_EQ(a.snapshots[j].t, b.snapshots[j].t);
        EXPECT_EQ(a.snapshots[j].u, b.snapshots[j].u);
    }
    EXPECT_EQ(a.meta.master_seed, b.meta.master_seed);
    EXPECT_EQ(a.meta.path_index, b.meta.path_index);
    EXPECT_EQ(a.meta.dt, b.meta.dt);
    EXPECT_EQ(a.meta.intervals, b.meta.intervals);
    EXPECT_EQ(a.meta.modes, b.meta.modes);
    EXPECT_EQ(a.meta.cutoff, b.meta.cutoff);
    EXPECT_EQ(a.meta.T, b.meta.T);
    EXPECT_EQ(a.meta.lambda, b.meta.lambda);
    EXPECT_EQ(a.meta.negativity_tol, b.meta.negativity_tol);
    EXPECT_EQ(a.meta.diverged, b.meta.diverged);
    EXPECT_EQ(a.meta.cutoff_active, b.meta.cutoff_active);
    EXPECT_EQ(std::isnan(a.meta.first_cutoff_time), std::isnan(b.meta.first_cutoff_time));
    EXPECT_EQ(a.meta.steps, b.meta.steps);
    EXPECT_EQ(a.meta.running_min, b.meta.running_min);
    EXPECT_EQ(a.meta.diagnostic, b.meta.diagnostic);
}

}  // namespace

TEST(TrajectoryIo, FileName) {
    EXPECT_EQ(trajectory_filename(42), "path_000042.csv");
    EXPECT_EQ(trajectory_filename(1234567), "path_1234567.csv");
}

TEST(TrajectoryIo, ExactRoundTrip) {
    TempDir dir("spdelab_io_roundtrip");
    const auto traj = sample_trajectory(3);
    const auto file = dir.path / trajectory_filename(3);
    write_trajectory(traj, file);
    expect_same(traj, read_trajectory(file));
    std::ifstream in(file);
    std::string meta, header;
    std::getline(in, meta);
    std::getline(in, header);
    EXPECT_NE(meta.find("\"schema_version\""), std::string::npos);
    EXPECT_EQ(header.rfind("t,u_0,u_1,", 0), 0u);
}

TEST(TrajectoryIo, DirectoryIsSortedByPathIndex) {
    TempDir dir("spdelab_io_dir");
    for (std::uint64_t i : {5u, 0u, 12u}) write_trajectory(sample_trajectory(i), dir.path / trajectory_filename(i));
    {
        std::ofstream other(dir.path / "notes.txt");
        other << "ignored\n";
    }
    const auto all = read_trajectory_dir(dir.path);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[0].meta.path_index, 0u);
    EXPECT_EQ(all[1].meta.path_index, 5u);
    EXPECT_EQ(all[2].meta.path_index, 12u);
}

TEST(TrajectoryIo, RejectsDamagedFiles) {
    TempDir dir("spdelab_io_bad");
    const auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir.path / name);
        out << text;
        return dir.path / name;
    };
    EXPECT_THROW(read_trajectory(dir.path / "missing.csv"), std::runtime_error);
    EXPECT_THROW(read_trajectory(write("empty.csv", "")), std::runtime_error);
    EXPECT_THROW(read_trajectory(write("meta.csv", "{not json\nt,u_0\n")), std::runtime_error);
    const auto good = dir.path / "good.csv";
    write_trajectory(sample_trajectory(0), good);
    std::ifstream in(good);
    std::string meta, header;
    std::getline(in, meta);
    std::getline(in, header);
    EXPECT_THROW(read_trajectory(write("cols.csv", meta + "\n" + header + "\n0,0,1\n")), std::runtime_error);
    EXPECT_THROW(read_trajectory(write("num.csv", meta + "\n" + header + "\n0,abc\n")), std::runtime_error);
    std::string future = meta;
    future.replace(future.find("\"schema_version\":1"), 18, "\"schema_version\":9");
    EXPECT_THROW(read_trajectory(write("ver.csv", future + "\n" + header + "\n")), std::runtime_error);
}

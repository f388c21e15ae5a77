#include "spdelab/ensemble.hpp"

#include "spdelab/errors.hpp"
#include "spdelab/trajectory_io.hpp"
#include "spdelab/weight.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace spdelab {

using ojson = nlohmann::ordered_json;

Summary summarize(const std::vector<double>& values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.median = quantile(values, 0.5);
    s.q25 = quantile(values, 0.25);
    s.q75 = quantile(values, 0.75);
    return s;
}

PathRecord analyze_path(const Trajectory& traj, const ExperimentConfig& cfg) {
    PathRecord r;
    const auto& meta = traj.meta;
    r.path_index = meta.path_index;
    r.diverged = meta.diverged;
    r.error = meta.diagnostic;
    r.cutoff_active = meta.cutoff_active;
    r.first_cutoff_time = meta.first_cutoff_time;
    r.running_min = meta.running_min;
    r.negativity_tol = meta.negativity_tol;
    r.max_principle_pass = check_max_principle(traj, meta.negativity_tol).pass;
    if (r.diverged) return r;

    const auto field = SampledField::from(traj);
    try {
        SpaceEstimatorOptions so;
        so.margin = cfg.margin;
        so.lag_cells = cfg.space_lags;
        so.statistic = cfg.statistic;
        r.space = holder_exponent_space(field, so);
    } catch (const std::exception& e) {
        r.space.note = e.what();
    }
    try {
        TimeEstimatorOptions to;
        to.x_lo = cfg.margin;
        to.x_hi = 1.0 - cfg.margin;
        to.lag_steps = cfg.time_lags;
        to.statistic = cfg.statistic;
        r.time = holder_exponent_time(field, to);
    } catch (const std::exception& e) {
        r.time.note = e.what();
    }
    try {
        r.boundary = boundary_decay(field, {cfg.boundary_lo, cfg.boundary_hi});
    } catch (const std::exception& e) {
        r.boundary.note = e.what();
    }
    try {
        r.weighted = weighted_holder_field(field, make_targets(cfg), make_psi(cfg.K, cfg.delta0), cfg.tolerance);
    } catch (const std::exception& e) {
        r.weighted.note = e.what();
    }
    return r;
}

EnsembleReport aggregate(const ExperimentConfig& cfg, std::vector<PathRecord> records) {
    std::sort(records.begin(), records.end(),
              [](const PathRecord& a, const PathRecord& b) { return a.path_index < b.path_index; });
    EnsembleReport rep;
    rep.config = cfg;
    rep.paths = std::move(records);

    std::vector<double> space, time, boundary, wspace, wtime, mins;
    std::size_t included = 0, active = 0, mp_pass = 0, sup_finite = 0;
    for (const auto& p : rep.paths) {
        if (p.excluded()) {
            ++rep.excluded;
            continue;
        }
        ++included;
        if (p.space.defined) space.push_back(p.space.value);
        if (p.time.defined) time.push_back(p.time.value);
        if (p.boundary.defined) boundary.push_back(p.boundary.slope);
        if (p.weighted.space.defined) wspace.push_back(p.weighted.space.value);
        if (p.weighted.time.defined) wtime.push_back(p.weighted.time.value);
        mins.push_back(p.running_min);
        active += p.cutoff_active ? 1 : 0;
        mp_pass += p.max_principle_pass ? 1 : 0;
        sup_finite += p.weighted.weighted_sup_finite ? 1 : 0;
    }
    rep.space = summarize(space);
    rep.time = summarize(time);
    rep.boundary = summarize(boundary);
    rep.weighted_space = summarize(wspace);
    rep.weighted_time = summarize(wtime);
    rep.undershoot = summarize(mins);
    rep.worst_undershoot = mins.empty() ? 0.0 : *std::min_element(mins.begin(), mins.end());
    if (included > 0) {
        const auto frac = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(included); };
        rep.cutoff_active_fraction = frac(active);
        rep.max_principle_pass_fraction = frac(mp_pass);
        rep.weighted_sup_finite_fraction = frac(sup_finite);
    }
    const std::size_t total = rep.paths.size();
    if (total > 0 && static_cast<double>(rep.excluded) > 0.05 * static_cast<double>(total)) {
        rep.valid = false;
        std::ostringstream s;
        s << rep.excluded << " of " << total << " paths diverged or failed (more than 5%)";
        rep.note = s.str();
    }
    return rep;
}

namespace {

std::size_t resolve_workers(const ExperimentConfig& cfg) {
    const std::size_t w = cfg.workers > 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(w, cfg.paths));
}

// Calls fn(i) for every path index; each index is handled by exactly one worker.
template <class F>
void for_each_path(std::size_t paths, std::size_t workers, F&& fn) {
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < paths; i = next++) fn(i);
    };
    if (workers <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

void fill_timing(EnsembleTiming* timing, std::size_t workers, std::size_t paths,
                 std::chrono::steady_clock::time_point start) {
    if (!timing) return;
    timing->workers = workers;
    timing->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    timing->paths_per_second = timing->wall_seconds > 0.0 ? static_cast<double>(paths) / timing->wall_seconds : 0.0;
}

}  // namespace

EnsembleReport run_ensemble(const ExperimentConfig& cfg, EnsembleTiming* timing) {
    if (auto v = config_violations(cfg); !v.empty()) throw ValidationError(std::move(v));
    const auto start = std::chrono::steady_clock::now();
    const SpdeProblem problem = make_problem(cfg);
    const SchemeParams scheme = make_scheme(cfg);
    const std::filesystem::path traj_dir = std::filesystem::path(cfg.out) / "trajectories";
    if (cfg.persist) std::filesystem::create_directories(traj_dir);

    const std::size_t workers = resolve_workers(cfg);
    std::vector<PathRecord> records(cfg.paths);
    for_each_path(cfg.paths, workers, [&](std::size_t i) {
        PathRecord rec;
        try {
            const Trajectory traj = simulate_path(problem, scheme, RngStream(cfg.seed, i));
            if (cfg.persist) write_trajectory(traj, traj_dir / trajectory_filename(i));
            rec = analyze_path(traj, cfg);
        } catch (const std::exception& e) {
            rec = PathRecord{};
            rec.path_index = i;
            rec.failed = true;
            rec.error = e.what();
        }
        records[i] = std::move(rec);
    });
    auto report = aggregate(cfg, std::move(records));
    fill_timing(timing, workers, cfg.paths, start);
    return report;
}

std::vector<std::string> simulate_ensemble(const ExperimentConfig& cfg, EnsembleTiming* timing) {
    if (auto v = config_violations(cfg); !v.empty()) throw ValidationError(std::move(v));
    const auto start = std::chrono::steady_clock::now();
    const SpdeProblem problem = make_problem(cfg);
    const SchemeParams scheme = make_scheme(cfg);
    const std::filesystem::path traj_dir = std::filesystem::path(cfg.out) / "trajectories";
    std::filesystem::create_directories(traj_dir);
    const std::size_t workers = resolve_workers(cfg);
    std::vector<std::string> errors(cfg.paths);
    for_each_path(cfg.paths, workers, [&](std::size_t i) {
        try {
            write_trajectory(simulate_path(problem, scheme, RngStream(cfg.seed, i)),
                             traj_dir / trajectory_filename(i));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    fill_timing(timing, workers, cfg.paths, start);
    return errors;
}

EnsembleReport estimate_directory(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    std::vector<PathRecord> records;
    for (const auto& traj : read_trajectory_dir(dir)) records.push_back(analyze_path(traj, cfg));
    return aggregate(cfg, std::move(records));
}

namespace {

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(); }

double as_num(const nlohmann::json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

ojson to_json(const Summary& s) {
    return ojson{{"count", s.count}, {"median", num(s.median)}, {"q25", num(s.q25)}, {"q75", num(s.q75)}};
}

Summary summary_from(const nlohmann::json& j) {
    return {j.at("count").get<std::size_t>(), as_num(j.at("median")), as_num(j.at("q25")), as_num(j.at("q75"))};
}

ojson to_json(const SlopeFit& f) {
    return ojson{{"slope", num(f.slope)}, {"std_error", num(f.std_error)}, {"r2", num(f.r2)},
                 {"intercept", num(f.intercept)}};
}

SlopeFit fit_from(const nlohmann::json& j) {
    return {as_num(j.at("slope")), as_num(j.at("std_error")), as_num(j.at("r2")), as_num(j.at("intercept"))};
}

ojson to_json(const ExponentEstimate& e) {
    ojson j;
    j["defined"] = e.defined;
    j["value"] = num(e.value);
    j["half_width"] = num(e.half_width);
    j["r2"] = num(e.r2);
    j["fits"] = e.fits;
    j["lags"] = e.lags;
    j["log_increment"] = e.log_increment;
    j["note"] = e.note;
    return j;
}

ExponentEstimate estimate_from(const nlohmann::json& j) {
    ExponentEstimate e;
    e.defined = j.at("defined").get<bool>();
    e.value = as_num(j.at("value"));
    e.half_width = as_num(j.at("half_width"));
    e.r2 = as_num(j.at("r2"));
    e.fits = j.at("fits").get<std::size_t>();
    e.lags = j.at("lags").get<std::vector<double>>();
    e.log_increment = j.at("log_increment").get<std::vector<double>>();
    e.note = j.at("note").get<std::string>();
    return e;
}

ojson to_json(const BoundaryDecayEstimate& b) {
    ojson j;
    j["defined"] = b.defined;
    j["slope"] = num(b.slope);
    j["half_width"] = num(b.half_width);
    j["left"] = to_json(b.left);
    j["right"] = to_json(b.right);
    ojson pts = ojson::array();
    for (const auto& p : b.points) pts.push_back(ojson::array({p.side, p.distance, p.envelope}));
    j["points"] = std::move(pts);
    j["note"] = b.note;
    return j;
}

BoundaryDecayEstimate boundary_from(const nlohmann::json& j) {
    BoundaryDecayEstimate b;
    b.defined = j.at("defined").get<bool>();
    b.slope = as_num(j.at("slope"));
    b.half_width = as_num(j.at("half_width"));
    b.left = fit_from(j.at("left"));
    b.right = fit_from(j.at("right"));
    for (const auto& p : j.at("points")) b.points.push_back({p.at(0).get<int>(), p.at(1).get<double>(), p.at(2).get<double>()});
    b.note = j.at("note").get<std::string>();
    return b;
}

ojson to_json(const HolderReport& h) {
    ojson j;
    j["predicted"] = ojson{{"time", num(h.predicted.time)}, {"space", num(h.predicted.space)},
                           {"weight", num(h.predicted.weight)}};
    j["space"] = to_json(h.space);
    j["time"] = to_json(h.time);
    j["weighted_sup"] = num(h.weighted_sup);
    j["weighted_sup_finite"] = h.weighted_sup_finite;
    j["space_consistent"] = h.space_consistent;
    j["time_consistent"] = h.time_consistent;
    j["note"] = h.note;
    return j;
}

HolderReport holder_from(const nlohmann::json& j, const HolderTargets& targets) {
    HolderReport h;
    h.targets = targets;
    const auto& pr = j.at("predicted");
    h.predicted = {as_num(pr.at("time")), as_num(pr.at("space")), as_num(pr.at("weight"))};
    h.space = estimate_from(j.at("space"));
    h.time = estimate_from(j.at("time"));
    h.weighted_sup_finite = j.at("weighted_sup_finite").get<bool>();
    h.weighted_sup = h.weighted_sup_finite ? as_num(j.at("weighted_sup")) : std::numeric_limits<double>::infinity();
    h.space_consistent = j.at("space_consistent").get<bool>();
    h.time_consistent = j.at("time_consistent").get<bool>();
    h.note = j.at("note").get<std::string>();
    return h;
}

ojson to_json(const PathRecord& p) {
    ojson j;
    j["path_index"] = p.path_index;
    j["diverged"] = p.diverged;
    j["failed"] = p.failed;
    j["error"] = p.error;
    j["cutoff_active"] = p.cutoff_active;
    j["first_cutoff_time"] = num(p.first_cutoff_time);
    j["running_min"] = num(p.running_min);
    j["negativity_tol"] = p.negativity_tol;
    j["max_principle_pass"] = p.max_principle_pass;
    j["space"] = to_json(p.space);
    j["time"] = to_json(p.time);
    j["boundary"] = to_json(p.boundary);
    j["weighted"] = to_json(p.weighted);
    return j;
}

PathRecord record_from(const nlohmann::json& j, const HolderTargets& targets) {
    PathRecord p;
    p.path_index = j.at("path_index").get<std::uint64_t>();
    p.diverged = j.at("diverged").get<bool>();
    p.failed = j.at("failed").get<bool>();
    p.error = j.at("error").get<std::string>();
    p.cutoff_active = j.at("cutoff_active").get<bool>();
    p.first_cutoff_time = as_num(j.at("first_cutoff_time"));
    p.running_min = as_num(j.at("running_min"));
    p.negativity_tol = j.at("negativity_tol").get<double>();
    p.max_principle_pass = j.at("max_principle_pass").get<bool>();
    p.space = estimate_from(j.at("space"));
    p.time = estimate_from(j.at("time"));
    p.boundary = boundary_from(j.at("boundary"));
    p.weighted = holder_from(j.at("weighted"), targets);
    return p;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + file.string());
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string report_json(const EnsembleReport& r) {
    ojson j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = serialize_config(r.config);
    ojson agg;
    agg["paths"] = r.paths.size();
    agg["excluded"] = r.excluded;
    agg["valid"] = r.valid;
    agg["note"] = r.note;
    agg["space_exponent"] = to_json(r.space);
    agg["time_exponent"] = to_json(r.time);
    agg["boundary_slope"] = to_json(r.boundary);
    agg["weighted_space_exponent"] = to_json(r.weighted_space);
    agg["weighted_time_exponent"] = to_json(r.weighted_time);
    agg["running_min"] = to_json(r.undershoot);
    agg["worst_undershoot"] = num(r.worst_undershoot);
    agg["cutoff_active_fraction"] = num(r.cutoff_active_fraction);
    agg["max_principle_pass_fraction"] = num(r.max_principle_pass_fraction);
    agg["weighted_sup_finite_fraction"] = num(r.weighted_sup_finite_fraction);
    const auto targets = make_targets(r.config);
    const auto predicted = target_exponents(targets);
    agg["targets"] = ojson{{"time", predicted.time}, {"space", predicted.space}, {"weight", predicted.weight}};
    j["aggregate"] = std::move(agg);
    ojson paths = ojson::array();
    for (const auto& p : r.paths) paths.push_back(to_json(p));
    j["paths"] = std::move(paths);
    return j.dump(1) + "\n";
}

EnsembleReport parse_report(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
        throw std::runtime_error("unsupported report schema_version");
    }
    EnsembleReport r;
    r.config = parse_config(j.at("config").get<std::string>());
    const auto targets = make_targets(r.config);
    const auto& agg = j.at("aggregate");
    r.excluded = agg.at("excluded").get<std::size_t>();
    r.valid = agg.at("valid").get<bool>();
    r.note = agg.at("note").get<std::string>();
    r.space = summary_from(agg.at("space_exponent"));
    r.time = summary_from(agg.at("time_exponent"));
    r.boundary = summary_from(agg.at("boundary_slope"));
    r.weighted_space = summary_from(agg.at("weighted_space_exponent"));
    r.weighted_time = summary_from(agg.at("weighted_time_exponent"));
    r.undershoot = summary_from(agg.at("running_min"));
    r.worst_undershoot = as_num(agg.at("worst_undershoot"));
    r.cutoff_active_fraction = as_num(agg.at("cutoff_active_fraction"));
    r.max_principle_pass_fraction = as_num(agg.at("max_principle_pass_fraction"));
    r.weighted_sup_finite_fraction = as_num(agg.at("weighted_sup_finite_fraction"));
    for (const auto& p : j.at("paths")) r.paths.push_back(record_from(p, targets));
    return r;
}

void write_report(const EnsembleReport& report, const std::filesystem::path& dir, const EnsembleTiming* timing) {
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", report_json(report));
    if (timing) {
        ojson t{{"schema_version", kReportSchemaVersion},
                {"workers", timing->workers},
                {"wall_seconds", timing->wall_seconds},
                {"paths_per_second", timing->paths_per_second}};
        write_text(dir / "timing.json", t.dump(1) + "\n");
    }
}

EnsembleReport read_report(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_report(buf.str());
}

void emit_plot_data(const EnsembleReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    std::ostringstream inc;
    inc << "path_index,estimator,log_lag,log_increment\n";
    std::ostringstream decay;
    decay << "path_index,side,log_rho,log_envelope\n";
    for (const auto& p : report.paths) {
        if (p.excluded()) continue;
        const std::pair<const char*, const ExponentEstimate*> curves[] = {
            {"space", &p.space}, {"time", &p.time}, {"weighted_space", &p.weighted.space},
            {"weighted_time", &p.weighted.time}};
        for (const auto& [name, e] : curves) {
            if (!e->defined) continue;
            for (std::size_t k = 0; k < e->lags.size() && k < e->log_increment.size(); ++k) {
                inc << p.path_index << ',' << name << ',' << fmt17(std::log(e->lags[k])) << ','
                    << fmt17(e->log_increment[k]) << '\n';
            }
        }
        if (p.boundary.defined) {
            for (const auto& pt : p.boundary.points) {
                decay << p.path_index << ',' << pt.side << ',' << fmt17(std::log(pt.distance)) << ','
                      << fmt17(std::log(pt.envelope)) << '\n';
            }
        }
    }
    write_text(dir / "increments.csv", inc.str());
    write_text(dir / "boundary_decay.csv", decay.str());

    std::ostringstream hist;
    hist << "quantity,bin_lo,bin_hi,count\n";
    constexpr std::size_t bins = 10;
    const auto add_hist = [&](const char* name, const std::vector<double>& v) {
        if (v.empty()) return;
        double lo = *std::min_element(v.begin(), v.end());
        double hi = *std::max_element(v.begin(), v.end());
        if (hi == lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        std::vector<std::size_t> counts(bins, 0);
        for (double x : v) {
            auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
            ++counts[std::min(k, bins - 1)];
        }
        const double w = (hi - lo) / static_cast<double>(bins);
        for (std::size_t k = 0; k < bins; ++k) {
            hist << name << ',' << fmt17(lo + static_cast<double>(k) * w) << ','
                 << fmt17(k + 1 == bins ? hi : lo + static_cast<double>(k + 1) * w) << ',' << counts[k] << '\n';
        }
    };
    std::vector<double> space, time, boundary;
    for (const auto& p : report.paths) {
        if (p.excluded()) continue;
        if (p.space.defined) space.push_back(p.space.value);
        if (p.time.defined) time.push_back(p.time.value);
        if (p.boundary.defined) boundary.push_back(p.boundary.slope);
    }
    add_hist("space_exponent", space);
    add_hist("time_exponent", time);
    add_hist("boundary_slope", boundary);
    write_text(dir / "histograms.csv", hist.str());
}

}  // namespace spdelab

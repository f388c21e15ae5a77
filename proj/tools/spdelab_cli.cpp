#include "spdelab/config.hpp"
#include "spdelab/ensemble.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/kernel.hpp"
#include "spdelab/sobolev.hpp"
#include "spdelab/trajectory_io.hpp"
#include "spdelab/weight.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace spdelab;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitEnsemble = 3;

struct Common {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> workers;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "key = value experiment file");
    cmd->add_option("--preset", c.preset, "heat | additive | lambda025 | variable-coeff");
    cmd->add_option("--seed", c.seed, "master seed");
    cmd->add_option("--paths", c.paths, "number of paths");
    cmd->add_option("--workers", c.workers, "worker threads (0 = available parallelism)");
    cmd->add_option("--out", c.out, "output directory");
}

ExperimentConfig resolve(const Common& c) {
    ExperimentConfig cfg;
    if (!c.config.empty()) {
        cfg = load_config(c.config);
    } else {
        cfg = preset_config(c.preset.empty() ? "lambda025" : c.preset);
    }
    if (c.seed) cfg.seed = *c.seed;
    if (c.paths) cfg.paths = *c.paths;
    if (c.workers) cfg.workers = *c.workers;
    if (!c.out.empty()) cfg.out = c.out;
    if (auto v = config_violations(cfg); !v.empty()) throw ValidationError(std::move(v));
    return cfg;
}

GridFunction read_samples(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file);
    std::vector<double> xs, us;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream s(line);
        double x = 0.0, u = 0.0;
        char comma = 0;
        if (!(s >> x >> comma >> u) || comma != ',') {
            if (xs.empty() && lineno == 1) continue;  // header
            throw std::runtime_error(file + ": bad sample on line " + std::to_string(lineno));
        }
        xs.push_back(x);
        us.push_back(u);
    }
    if (xs.size() < 3) throw std::runtime_error(file + ": need at least three samples");
    const std::size_t n = xs.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        if (std::abs(xs[i] - static_cast<double>(i) / static_cast<double>(n)) > 1e-9) {
            throw std::runtime_error(file + ": x must be the uniform grid i/N on [0, 1]");
        }
    }
    return GridFunction(std::move(us));
}

void print_issues(const ValidationError& e) {
    std::cerr << "validation failed:\n";
    for (const auto& i : e.issues()) std::cerr << "  - " << i << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spdelab: numerical lab for a super-linear multiplicative SPDE on (0,1)"};
    app.require_subcommand(1);

    Common sim_opts, run_opts;
    auto* sim = app.add_subcommand("simulate", "simulate paths and persist trajectories");
    add_common(sim, sim_opts);

    auto* run = app.add_subcommand("run", "simulate, estimate, report and emit plot data");
    add_common(run, run_opts);

    std::string traj_dir, report_out, est_config;
    double est_kappa = 0.3, est_lambda = 0.25, est_p = 32.0, est_theta = 1.0;
    auto* est = app.add_subcommand("estimate", "run the estimators on persisted trajectories");
    est->add_option("--traj-dir", traj_dir, "directory with path_*.csv files")->required();
    est->add_option("--config", est_config, "experiment file supplying the remaining settings");
    auto* k_opt = est->add_option("--kappa", est_kappa);
    auto* l_opt = est->add_option("--lambda", est_lambda);
    auto* p_opt = est->add_option("--p", est_p);
    auto* t_opt = est->add_option("--theta", est_theta);
    est->add_option("--out", report_out, "report file")->required();

    double order = 0.0, norm_p = 2.0, norm_theta = 1.0, norm_K = 2.0, norm_delta0 = 1.0;
    std::optional<double> norm_kappa;
    std::string input;
    auto* norm = app.add_subcommand("norm", "weighted Sobolev norms of a sampled function");
    norm->add_option("--order", order, "0, 1, 2 or -(1/2 + kappa)")->required();
    norm->add_option("--p", norm_p)->required();
    norm->add_option("--theta", norm_theta)->required();
    norm->add_option("--kappa", norm_kappa);
    norm->add_option("--K", norm_K, "weight parameter K");
    norm->add_option("--delta0", norm_delta0, "weight parameter delta0");
    norm->add_option("--input", input, "csv with columns x,u on the grid i/N")->required();

    double weight_K = 2.0, weight_delta0 = 1.0;
    std::size_t weight_n = 1024;
    std::string weight_config, weight_preset;
    auto* weight = app.add_subcommand("check-weight", "check the weight generator condition and comparability");
    auto* wk_opt = weight->add_option("--K", weight_K, "weight parameter K");
    auto* wd_opt = weight->add_option("--delta0", weight_delta0, "weight parameter delta0");
    weight->add_option("--grid", weight_n, "grid cells for the check (at least 1001)");
    weight->add_option("--config", weight_config, "take a, b, c (and K, delta0) from an experiment file");
    weight->add_option("--preset", weight_preset, "take a, b, c (and K, delta0) from a preset");

    std::string plot_report, plot_out;
    auto* plots = app.add_subcommand("emit-plots", "write plot CSVs from a report");
    plots->add_option("--report", plot_report)->required();
    plots->add_option("--out", plot_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const auto cfg = resolve(sim_opts);
            EnsembleTiming timing;
            const auto errors = simulate_ensemble(cfg, &timing);
            std::size_t failed = 0;
            for (std::size_t i = 0; i < errors.size(); ++i) {
                if (!errors[i].empty()) {
                    ++failed;
                    std::cerr << "path " << i << ": " << errors[i] << '\n';
                }
            }
            std::cout << nlohmann::ordered_json{{"paths", cfg.paths},
                                                {"failed", failed},
                                                {"directory", (std::filesystem::path(cfg.out) / "trajectories").string()},
                                                {"wall_seconds", timing.wall_seconds}}
                             .dump()
                      << '\n';
            return failed > 0 ? kExitEnsemble : 0;
        }
        if (*run) {
            const auto cfg = resolve(run_opts);
            EnsembleTiming timing;
            const auto report = run_ensemble(cfg, &timing);
            write_report(report, cfg.out, &timing);
            emit_plot_data(report, std::filesystem::path(cfg.out) / "plots");
            std::cout << nlohmann::ordered_json{{"report", (std::filesystem::path(cfg.out) / "report.json").string()},
                                                {"valid", report.valid},
                                                {"excluded", report.excluded},
                                                {"space_exponent", report.space.median},
                                                {"time_exponent", report.time.median},
                                                {"boundary_slope", report.boundary.median}}
                             .dump()
                      << '\n';
            return report.valid ? 0 : kExitEnsemble;
        }
        if (*est) {
            ExperimentConfig cfg = est_config.empty() ? preset_config("lambda025") : load_config(est_config);
            if (*k_opt) cfg.kappa = est_kappa;
            if (*l_opt) cfg.lambda = est_lambda;
            if (*p_opt) cfg.p = est_p;
            if (*t_opt) cfg.theta = est_theta;
            if (*k_opt || *l_opt || *p_opt || *t_opt) {
                const auto t = HolderTargets::with_default_alpha_beta(cfg.kappa, cfg.lambda, cfg.p, cfg.theta, cfg.delta);
                cfg.alpha = t.alpha;
                cfg.beta = t.beta;
            }
            const auto trajs = read_trajectory_dir(traj_dir);
            if (!trajs.empty()) {
                cfg.N = trajs.front().intervals();
                cfg.T = trajs.front().meta.T;
                cfg.paths = trajs.size();
                cfg.snapshots = trajs.front().snapshots.size();
                cfg.lambda = trajs.front().meta.lambda;
            }
            if (auto v = make_targets(cfg).violations(); !v.empty()) throw ValidationError(std::move(v));
            std::vector<PathRecord> records;
            for (const auto& t : trajs) records.push_back(analyze_path(t, cfg));
            const auto report = aggregate(cfg, std::move(records));
            std::ofstream out(report_out, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open " + report_out);
            out << report_json(report);
            return report.valid ? 0 : kExitEnsemble;
        }
        if (*norm) {
            const GridFunction u = read_samples(input);
            const WeightFn psi = make_psi(norm_K, norm_delta0);
            nlohmann::ordered_json j;
            j["order"] = order;
            j["p"] = norm_p;
            j["theta"] = norm_theta;
            j["intervals"] = u.intervals();
            if (order < 0.0) {
                const double kappa = norm_kappa ? *norm_kappa : -order - 0.5;
                const auto spec = SpaceSpec::negative(norm_p, norm_theta, kappa);
                if (std::abs(spec.gamma - order) > 1e-12) throw std::invalid_argument("--order must equal -(1/2 + kappa)");
                j["kappa"] = kappa;
                j["norm"] = bessel_negative_norm(u, spec, make_zeta(norm_p), psi, *shared_kernel_table(kappa));
                j["normalization"] = "c(kappa) = 1";
            } else {
                const auto spec = SpaceSpec::integer(norm_p, norm_theta, static_cast<int>(std::lround(order)));
                if (spec.gamma != order) throw std::invalid_argument("--order must be 0, 1, 2 or negative");
                j["norm"] = weighted_integer_norm(u, spec);
                j["norm_psi"] = weighted_integer_norm(u, spec, psi);
                if (order == 0.0) j["dyadic_norm"] = dyadic_norm(u, spec, make_zeta(norm_p), psi);
            }
            std::cout << j.dump() << '\n';
            return 0;
        }
        if (*weight) {
            SpdeProblem problem;
            if (!weight_config.empty() || !weight_preset.empty()) {
                const auto cfg = weight_config.empty() ? preset_config(weight_preset) : load_config(weight_config);
                problem = make_problem(cfg);
                if (!*wk_opt) weight_K = cfg.K;
                if (!*wd_opt) weight_delta0 = cfg.delta0;
            }
            const WeightFn psi = make_psi(weight_K, weight_delta0);
            const double times[] = {0.0};
            const auto check = check_generator_condition(psi, problem.a, problem.b, problem.c, weight_n, times);
            const auto comp = comparability_constants(psi, weight_n);
            const char* status = check.status == GeneratorStatus::pass   ? "pass"
                                 : check.status == GeneratorStatus::fail ? "fail"
                                                                         : "precondition_violated";
            nlohmann::ordered_json j{{"K", weight_K},
                                     {"delta0", weight_delta0},
                                     {"grid", weight_n},
                                     {"status", status},
                                     {"worst", std::isfinite(check.worst) ? nlohmann::ordered_json(check.worst)
                                                                          : nlohmann::ordered_json()},
                                     {"c_lo", comp.c_lo},
                                     {"c_hi", comp.c_hi},
                                     {"c2_sum", check.c2_sum},
                                     {"assumption_holds", check.assumption_holds},
                                     {"detail", check.detail}};
            std::cout << j.dump() << '\n';
            return check.passed() ? 0 : kExitValidation;
        }
        if (*plots) {
            emit_plot_data(read_report(plot_report), plot_out);
            return 0;
        }
    } catch (const ValidationError& e) {
        print_issues(e);
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

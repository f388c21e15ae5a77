// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "spdelab/config.hpp"
#include "spdelab/ensemble.hpp"
#include "spdelab/kernel.hpp"
#include "spdelab/noise.hpp"
#include "spdelab/sobolev.hpp"
#include "spdelab/solver.hpp"
#include "spdelab/weight.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace spdelab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome deterministic_limit() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = 256;
    const double T = 0.1;
    SpdeProblem p;
    p.xi = CoefficientField();
    p.u0 = GridFunction::sample(n, [](double x) { return std::sin(std::numbers::pi * x); });
    p.T = T;
    SchemeParams s;
    s.intervals = n;
    s.dt = 1e-5;
    s.snapshot_times = uniform_snapshot_times(T, 11);
    const auto traj = simulate_path(p, s, RngStream(1, 0));
    double err = 0.0;
    for (const auto& snap : traj.snapshots) {
        const double amp = std::exp(-std::numbers::pi * std::numbers::pi * snap.t);
        for (std::size_t i = 0; i <= n; ++i) {
            const double x = static_cast<double>(i) / n;
            err = std::max(err, std::abs(snap.u[i] - amp * std::sin(std::numbers::pi * x)));
        }
    }
    const double secs = seconds_since(t0);
    return {err < 1e-3 && secs < 10.0, "sup error " + fmt("%.3e", err) + ", " + fmt("%.2f s", secs)};
}

Outcome noise_calibration() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t modes = 8, draws = 10000;
    const double dt = 0.01;
    const BasisSpec spec(modes, 16);
    RngStream rng(2024, 0);
    std::vector<std::vector<double>> w(modes, std::vector<double>(draws));
    for (std::size_t d = 0; d < draws; ++d) {
        const auto inc = sample_increments(spec, dt, rng);
        for (std::size_t k = 0; k < modes; ++k) w[k][d] = inc.dw[k];
    }
    double worst_ratio = 0.0, worst_z = 0.0, pair_z = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < modes; ++k) {
        double s2 = 0.0;
        for (double v : w[k]) s2 += v * v;
        const double ratio = s2 / draws / dt;
        ok = ok && ratio >= 0.94 && ratio <= 1.06;
        worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
        for (std::size_t j = k + 1; j < modes; ++j) {
            double c = 0.0, c2 = 0.0;
            for (std::size_t d = 0; d < draws; ++d) {
                const double prod = w[k][d] * w[j][d];
                c += prod;
                c2 += prod * prod;
            }
            const double mean = c / draws;
            const double se = std::sqrt((c2 / draws - mean * mean) / draws);
            const double z = std::abs(mean) / se;
            if (k == 0 && j == 1) {
                pair_z = z;
                ok = ok && z <= 3.0;
            }
            worst_z = std::max(worst_z, z);
        }
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 10.0;
    return {ok, "max |var/dt - 1| " + fmt("%.4f", worst_ratio) + " over " + std::to_string(modes) +
                    " modes, |cov(1,2)|/se " + fmt("%.2f", pair_z) + " (max over all " +
                    std::to_string(modes * (modes - 1) / 2) + " pairs " + fmt("%.2f", worst_z) + "), " +
                    fmt("%.2f s", secs)};
}

Outcome additive_calibration() {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = preset_config("additive");
    cfg.paths = 64;
    cfg.persist = false;
    const auto rep = run_ensemble(cfg);
    const double secs = seconds_since(t0);
    const bool ok = rep.valid && rep.space.median >= 0.40 && rep.space.median <= 0.50 && rep.time.median >= 0.20 &&
                    rep.time.median <= 0.30;
    return {ok, "median space " + fmt("%.4f", rep.space.median) + ", median time " + fmt("%.4f", rep.time.median) +
                    ", " + std::to_string(rep.paths.size() - rep.excluded) + " paths, " + fmt("%.1f s", secs)};
}

Outcome max_principle() {
    const auto worst_for = [](std::size_t n, double T, double dt, std::size_t paths, std::size_t& passed) {
        SpdeProblem p;
        p.lambda = 0.0;
        p.u0 = GridFunction::sample(n, [](double x) { return x * (1 - x); });
        p.T = T;
        SchemeParams s;
        s.intervals = n;
        s.dt = dt;
        double worst = 0.0;
        passed = 0;
        for (std::size_t i = 0; i < paths; ++i) {
            const auto traj = simulate_path(p, s, RngStream(4, i));
            const auto mp = check_max_principle(traj, traj.meta.negativity_tol);
            passed += mp.pass && !traj.meta.diverged ? 1 : 0;
            worst = std::min(worst, mp.worst);
        }
        return worst;
    };
    std::size_t pass_a = 0, pass_b = 0, pass_c = 0, pass_d = 0;
    worst_for(64, 0.05, 2e-3, 64, pass_a);
    worst_for(64, 0.05, 5e-4, 64, pass_b);
    const double coarse = worst_for(8, 0.1, 1.0 / 16.0, 256, pass_c);
    const double fine = worst_for(8, 0.1, 1.0 / 64.0, 256, pass_d);
    const double shrink = fine == 0.0 ? std::numeric_limits<double>::infinity() : coarse / fine;
    const bool ok = pass_a == 64 && pass_b == 64 && pass_c == 256 && pass_d == 256 && coarse < 0.0 && shrink >= 1.5;
    return {ok, "N=64: " + std::to_string(pass_a) + "/64 and " + std::to_string(pass_b) + "/64 pass; N=8: " +
                    std::to_string(pass_c) + "/256 and " + std::to_string(pass_d) + "/256 pass, worst undershoot " +
                    fmt("%.3e", coarse) + " -> " + fmt("%.3e", fine) + " (shrink " + fmt("%.2f", shrink) + "x)"};
}

Outcome superlinear_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = preset_config("lambda025");
    cfg.paths = 64;
    cfg.persist = false;
    const auto rep = run_ensemble(cfg);
    const double secs = seconds_since(t0);
    const double space_min = 0.5 - cfg.lambda - 0.10;
    const double time_min = 0.25 - cfg.lambda / 2.0 - 0.05;
    const bool ok = rep.excluded == 0 && rep.space.median >= space_min && rep.time.median >= time_min &&
                    rep.weighted_sup_finite_fraction >= 0.95 && rep.boundary.median >= 0.8;
    return {ok, "median space " + fmt("%.4f", rep.space.median) + " (>= " + fmt("%.3f", space_min) + "), time " +
                    fmt("%.4f", rep.time.median) + " (>= " + fmt("%.3f", time_min) + "), finite weighted sup " +
                    fmt("%.3f", rep.weighted_sup_finite_fraction) + ", boundary slope " +
                    fmt("%.4f", rep.boundary.median) + ", excluded " + std::to_string(rep.excluded) + ", " +
                    fmt("%.1f s", secs)};
}

Outcome cutoff_consistency() {
    const auto cfg = preset_config("lambda025");
    const auto problem = make_problem(cfg);
    auto scheme = make_scheme(cfg);
    scheme.snapshot_times = uniform_snapshot_times(cfg.T, 11);
    std::size_t used = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; used < 16 && seed < 64; ++seed) {
        scheme.cutoff = cfg.m;
        const auto a = simulate_path(problem, scheme, RngStream(seed, 0));
        if (a.meta.cutoff_active || a.meta.diverged) continue;
        scheme.cutoff = 2.0 * cfg.m;
        const auto b = simulate_path(problem, scheme, RngStream(seed, 0));
        for (std::size_t j = 0; j < a.snapshots.size(); ++j) {
            for (std::size_t i = 0; i < a.snapshots[j].u.size(); ++i) {
                worst = std::max(worst, std::abs(a.snapshots[j].u[i] - b.snapshots[j].u[i]));
            }
        }
        ++used;
    }
    return {used == 16 && worst <= 1e-12,
            std::to_string(used) + " inactive seeds, max sup difference " + fmt("%.3e", worst)};
}

Outcome kernel_threshold() {
    struct Case {
        double kappa, r;
        Integrability expected;
    };
    const Case cases[] = {{0.1, 1.2, Integrability::finite},  {0.1, 1.3, Integrability::divergent},
                          {0.25, 1.5, Integrability::finite}, {0.25, 2.5, Integrability::divergent},
                          {0.4, 4.0, Integrability::finite},  {0.4, 6.0, Integrability::divergent}};
    std::size_t right = 0;
    for (const auto& c : cases) right += integrability_test(c.kappa, c.r).verdict == c.expected ? 1 : 0;
    return {right == 6, std::to_string(right) + "/6 verdicts match r(1 - 2 kappa) < 1"};
}

std::vector<std::function<double(double)>> function_family() {
    std::vector<std::function<double(double)>> f;
    for (double a : {0.1, 0.3, 0.5, 1.0, 2.0}) f.push_back([a](double x) { return std::pow(x, a) * (1 - x); });
    for (int k = 1; k <= 5; ++k) f.push_back([k](double x) { return std::sin(k * std::numbers::pi * x); });
    for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        f.push_back([c](double x) { return x * (1 - x) * std::exp(-(x - c) * (x - c) / 0.01); });
    }
    for (double c : {0.2, 0.4, 0.5, 0.6, 0.8}) {
        f.push_back([c](double x) { return x * (1 - x) * std::pow(std::abs(x - c), 0.3); });
    }
    return f;
}

Outcome norm_equivalence() {
    const auto psi = make_psi(2.0, 1.0);
    const auto family = function_family();
    const auto constant = [&](std::size_t n) {
        double lo = 1e300, hi = 0.0;
        for (const auto& [p, theta] : {std::pair{2.0, 1.0}, std::pair{4.0, 2.0}}) {
            const auto spec = SpaceSpec::integer(p, theta, 0);
            const auto zeta = make_zeta(p);
            for (const auto& f : family) {
                const auto u = GridFunction::sample(n, f);
                const double r = dyadic_norm(u, spec, zeta, psi) / weighted_integer_norm(u, spec, psi);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
        return std::max(hi, 1.0 / lo);
    };
    const double c1 = constant(1024);
    const double c2 = constant(2048);
    const double change = std::abs(c2 / c1 - 1.0);
    return {change < 0.05, "C = " + fmt("%.4f", c1) + " -> " + fmt("%.4f", c2) + " (change " +
                               fmt("%.2f%%", 100.0 * change) + ") over " + std::to_string(family.size()) +
                               " functions"};
}

Outcome weight_condition() {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double K = 2.0, d0 = 1.0;
    const auto psi = make_psi(K, d0);
    const double times[] = {0.0, 0.5, 1.0};
    std::size_t passed = 0;
    for (int draw = 0; draw < 100; ++draw) {
        const double a1 = 0.3 * std::abs(U(gen)), a2 = 0.3 * std::abs(U(gen)), a3 = 0.3 * std::abs(U(gen));
        const auto a = CoefficientField::polynomial({d0 + 0.5 * std::abs(U(gen)), a1, a2, a3});
        const auto b = CoefficientField::polynomial({2 * a1 + 2.5 * K * U(gen), 4 * a2, 6 * a3});
        const auto c = CoefficientField::constant(U(gen));
        passed += check_generator_condition(psi, a, b, c, 512, times).passed() ? 1 : 0;
    }
    const auto adversarial = check_generator_condition(psi, CoefficientField::constant(1.0),
                                                       CoefficientField::constant(10.0 * K), CoefficientField(), 512,
                                                       times);
    const bool flagged = adversarial.status == GeneratorStatus::precondition_violated;
    return {passed == 100 && flagged, std::to_string(passed) + "/100 admissible draws pass; b = 10K " +
                                          (flagged ? "reported as precondition failure" : "not flagged")};
}

Outcome estimator_calibration() {
    const std::size_t n = 2048;
    double worst = 0.0;
    for (int g = 1; g <= 9; ++g) {
        const double gamma = 0.1 * g;
        for (double x0 : {0.5, 0.375}) {
            SampledField field;
            field.times = {0.0};
            std::vector<double> row(n + 1);
            for (std::size_t i = 0; i <= n; ++i) row[i] = std::pow(std::abs(static_cast<double>(i) / n - x0), gamma);
            field.rows.push_back(std::move(row));
            SpaceEstimatorOptions opts;
            opts.statistic = IncrementStatistic::max;
            const auto e = holder_exponent_space(field, opts);
            worst = std::max(worst, e.defined ? std::abs(e.value - gamma) : 1.0);
        }
    }
    return {worst <= 0.05, "max |estimate - gamma| " + fmt("%.4f", worst) + " over gamma = 0.1..0.9"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"deterministic limit", deterministic_limit},
        {"noise calibration", noise_calibration},
        {"additive stochastic heat calibration", additive_calibration},
        {"maximum principle", max_principle},
        {"super-linear regime consistency", superlinear_consistency},
        {"cutoff consistency", cutoff_consistency},
        {"kernel integrability threshold", kernel_threshold},
        {"norm-equivalence constants", norm_equivalence},
        {"weight condition", weight_condition},
        {"estimator calibration", estimator_calibration},
    };
    int failed = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}

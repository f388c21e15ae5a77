#include "spdelab/config.hpp"

#include "spdelab/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spdelab {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t parse_uint(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("expected a nonnegative integer, got '" + std::string(s) + "'");
    }
    return v;
}

template <class T, class F>
std::vector<T> parse_list(std::string_view s, F&& item) {
    std::vector<T> out;
    s = trim(s);
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(static_cast<T>(item(s.substr(start, comma - start))));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(std::string_view s) {
    s = trim(s);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) s += ", ";
        s += f(v[i]);
    }
    return s;
}

void resolve_alpha_beta(ExperimentConfig& c) {
    const auto t = HolderTargets::with_default_alpha_beta(c.kappa, c.lambda, c.p, c.theta, c.delta);
    c.alpha = t.alpha;
    c.beta = t.beta;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        const auto real = [](double ExperimentConfig::*f) {
            return [f](ExperimentConfig& c, std::string_view v) { c.*f = parse_double(v); };
        };
        const auto count = [](std::size_t ExperimentConfig::*f) {
            return [f](ExperimentConfig& c, std::string_view v) { c.*f = static_cast<std::size_t>(parse_uint(v)); };
        };
        const auto poly = [](std::vector<double> ExperimentConfig::*f) {
            return [f](ExperimentConfig& c, std::string_view v) { c.*f = parse_list<double>(v, parse_double); };
        };
        t["a"] = poly(&ExperimentConfig::a);
        t["b"] = poly(&ExperimentConfig::b);
        t["c"] = poly(&ExperimentConfig::c);
        t["xi"] = poly(&ExperimentConfig::xi);
        t["noise"] = [](ExperimentConfig& c, std::string_view v) {
            v = trim(v);
            if (v == "multiplicative") c.noise = NoiseKind::multiplicative;
            else if (v == "additive") c.noise = NoiseKind::additive;
            else throw std::invalid_argument("noise must be multiplicative or additive");
        };
        t["lambda"] = real(&ExperimentConfig::lambda);
        t["u0"] = [](ExperimentConfig& c, std::string_view v) { c.u0 = std::string(trim(v)); };
        t["T"] = real(&ExperimentConfig::T);
        t["delta0"] = real(&ExperimentConfig::delta0);
        t["K"] = real(&ExperimentConfig::K);
        t["N"] = count(&ExperimentConfig::N);
        t["dt"] = real(&ExperimentConfig::dt);
        t["K_modes"] = count(&ExperimentConfig::K_modes);
        t["m"] = real(&ExperimentConfig::m);
        t["snapshots"] = count(&ExperimentConfig::snapshots);
        t["kappa"] = real(&ExperimentConfig::kappa);
        t["p"] = real(&ExperimentConfig::p);
        t["theta"] = real(&ExperimentConfig::theta);
        t["alpha"] = real(&ExperimentConfig::alpha);
        t["beta"] = real(&ExperimentConfig::beta);
        t["delta"] = real(&ExperimentConfig::delta);
        t["margin"] = real(&ExperimentConfig::margin);
        t["boundary_lo"] = real(&ExperimentConfig::boundary_lo);
        t["boundary_hi"] = real(&ExperimentConfig::boundary_hi);
        t["space_lags"] = [](ExperimentConfig& c, std::string_view v) {
            c.space_lags = parse_list<std::size_t>(v, parse_uint);
        };
        t["time_lags"] = [](ExperimentConfig& c, std::string_view v) {
            c.time_lags = parse_list<std::size_t>(v, parse_uint);
        };
        t["statistic"] = [](ExperimentConfig& c, std::string_view v) {
            v = trim(v);
            if (v == "median") c.statistic = IncrementStatistic::median;
            else if (v == "mean") c.statistic = IncrementStatistic::mean;
            else if (v == "max") c.statistic = IncrementStatistic::max;
            else throw std::invalid_argument("statistic must be median, mean or max");
        };
        t["tolerance"] = real(&ExperimentConfig::tolerance);
        t["paths"] = count(&ExperimentConfig::paths);
        t["seed"] = [](ExperimentConfig& c, std::string_view v) { c.seed = parse_uint(v); };
        t["workers"] = count(&ExperimentConfig::workers);
        t["out"] = [](ExperimentConfig& c, std::string_view v) { c.out = std::string(trim(v)); };
        t["persist"] = [](ExperimentConfig& c, std::string_view v) { c.persist = parse_bool(v); };
        return t;
    }();
    return table;
}

}  // namespace

std::string_view to_string(IncrementStatistic s) {
    switch (s) {
        case IncrementStatistic::mean: return "mean";
        case IncrementStatistic::max: return "max";
        case IncrementStatistic::median: break;
    }
    return "median";
}

std::string_view to_string(NoiseKind k) { return k == NoiseKind::additive ? "additive" : "multiplicative"; }

std::vector<std::string> preset_names() { return {"heat", "additive", "lambda025", "variable-coeff"}; }

ExperimentConfig preset_config(std::string_view name) {
    ExperimentConfig c;
    if (name == "lambda025") {
        c.margin = 0.125;
    } else if (name == "heat") {
        c.xi = {0.0};
        c.lambda = 0.0;
        c.u0 = "sine";
        c.dt = 1e-5;
        c.snapshots = 101;
        c.kappa = 0.25;
        c.paths = 1;
        c.margin = 0.125;
    } else if (name == "additive") {
        c.noise = NoiseKind::additive;
        c.lambda = 0.0;
        c.u0 = "zero";
        c.T = 0.5;
        c.N = 512;
        c.snapshots = 2001;
        c.kappa = 0.05;
        c.p = 100.0;
        c.margin = 0.25;
        c.space_lags = {4, 8, 16, 32};
    } else if (name == "variable-coeff") {
        c.a = {1.1, 0.1};
        c.b = {0.2, -0.1};
        c.c = {-0.1};
        c.xi = {0.5};
        c.lambda = 0.1;
        c.u0 = "bump";
        c.kappa = 0.2;
        c.paths = 16;
        c.margin = 0.125;
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    resolve_alpha_beta(c);
    return c;
}

GridFunction initial_condition(std::string_view name, std::size_t intervals) {
    if (name == "parabola") return GridFunction::sample(intervals, [](double x) { return x * (1.0 - x); });
    if (name == "sine") return GridFunction::sample(intervals, [](double x) { return std::sin(std::numbers::pi * x); });
    if (name == "zero") return GridFunction(intervals);
    if (name == "bump") {
        return GridFunction::sample(intervals, [](double x) {
            const double z = (x - 0.5) / 0.25;
            return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
        });
    }
    throw std::invalid_argument("unknown initial condition '" + std::string(name) + "'");
}

SpdeProblem make_problem(const ExperimentConfig& c) {
    SpdeProblem p;
    p.a = CoefficientField::polynomial(c.a);
    p.b = CoefficientField::polynomial(c.b);
    p.c = CoefficientField::polynomial(c.c);
    p.xi = CoefficientField::polynomial(c.xi);
    p.lambda = c.lambda;
    p.u0 = initial_condition(c.u0, c.N);
    p.T = c.T;
    p.delta0 = c.delta0;
    p.K = c.K;
    p.noise = c.noise;
    return p;
}

SchemeParams make_scheme(const ExperimentConfig& c) {
    SchemeParams s;
    s.intervals = c.N;
    // Whole number of steps per snapshot gap, so snapshots stay uniformly spaced.
    const double h = 1.0 / static_cast<double>(c.N);
    const double nominal = c.dt > 0.0 ? c.dt : 0.25 * h * h;
    const double gaps = static_cast<double>(c.snapshots > 1 ? c.snapshots - 1 : 1);
    const double per_gap = std::max(1.0, std::ceil(c.T / gaps / nominal * (1.0 - 1e-12)));
    s.dt = c.T / (gaps * per_gap);
    s.modes = c.K_modes;
    s.cutoff = c.m;
    s.snapshot_times = uniform_snapshot_times(c.T, c.snapshots);
    s.cutoff_weight_exponent = make_targets(c).weight_exponent();
    return s;
}

HolderTargets make_targets(const ExperimentConfig& c) {
    return {c.kappa, c.lambda, c.p, c.theta, c.alpha, c.beta, c.delta};
}

std::vector<std::string> config_violations(const ExperimentConfig& c) {
    std::vector<std::string> out;
    const auto bad = [&](const std::string& s) { out.push_back(s); };
    if (c.N < 8) bad("N must be at least 8");
    if (!(c.dt >= 0.0 && std::isfinite(c.dt))) bad("dt must be a nonnegative number");
    if (c.N >= 8 && c.K_modes > c.N - 1) bad("K_modes must not exceed N - 1");
    if (!(c.m > 0.0)) bad("cutoff m must be positive");
    if (c.snapshots < 2) bad("snapshots must be at least 2");
    if (!(c.margin > 0.0 && c.margin < 0.5)) bad("margin must lie in (0, 1/2)");
    if (!(c.tolerance >= 0.0)) bad("tolerance must be nonnegative");
    if (c.out.empty()) bad("out must name a directory");
    const std::set<std::string> u0_names{"parabola", "sine", "zero", "bump"};
    if (!u0_names.count(c.u0)) bad("u0 must be one of parabola, sine, zero, bump");

    if (c.N >= 8) {
        const double h = 1.0 / static_cast<double>(c.N);
        const double lo = c.boundary_lo > 0.0 ? c.boundary_lo : 2.0 * h;
        if (!(lo < c.boundary_hi && c.boundary_hi <= 0.1)) {
            bad("boundary fit window must satisfy 0 < boundary_lo < boundary_hi <= 0.1");
        } else {
            const auto first = static_cast<long>(std::ceil(lo * static_cast<double>(c.N) - 1e-9));
            const auto last = static_cast<long>(std::floor(c.boundary_hi * static_cast<double>(c.N) + 1e-9));
            if (last - first + 1 < 8) bad("boundary fit window holds fewer than 8 grid points");
        }
        if (c.margin > 0.0 && c.margin < 0.5) {
            const auto lags = c.space_lags.empty() ? dyadic_lag_cells(c.N, c.margin / 4.0) : c.space_lags;
            if (lags.size() < 2 || lags.front() == 0 || lags.back() < 8 * lags.front()) {
                bad("space lags must span at least three octaves (raise N or margin)");
            } else if (static_cast<double>(lags.back()) * h > c.margin / 4.0 + 1e-12) {
                bad("largest space lag must not exceed margin/4");
            }
        }
    }
    if (c.time_lags.size() < 2 || c.time_lags.front() == 0 || c.time_lags.back() < 8 * c.time_lags.front()) {
        bad("time lags must span at least three octaves");
    } else if (c.time_lags.back() >= c.snapshots) {
        bad("largest time lag must be smaller than the snapshot count");
    }

    for (auto& v : make_targets(c).violations()) out.push_back(std::move(v));
    if (c.N >= 8 && u0_names.count(c.u0)) {
        const auto problem = make_problem(c);
        for (auto& v : problem.violations()) out.push_back(std::move(v));
        if (c.T > 0.0) {
            const double h = 1.0 / static_cast<double>(c.N);
            const double nominal = c.dt > 0.0 ? c.dt : 0.25 * h * h;
            const double dt = c.T / std::max(1.0, std::round(c.T / nominal));
            if (!(2.0 * dt * problem.c.sup_abs() < 1.0)) bad("dt < 1/(2 sup|c|) violated");
        }
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text) {
    std::vector<std::string> errors;
    std::vector<std::tuple<std::size_t, std::string, std::string>> entries;
    std::set<std::string> seen;
    std::string preset = "lambda025";
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!seen.insert(key).second) {
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            continue;
        }
        if (key == "preset") {
            preset = value;
            if (!std::set<std::string>{"heat", "additive", "lambda025", "variable-coeff"}.count(value)) {
                errors.push_back("line " + std::to_string(lineno) + ": unknown preset '" + value + "'");
                preset = "lambda025";
            }
            continue;
        }
        if (!setters().count(key)) {
            errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            continue;
        }
        entries.emplace_back(lineno, key, value);
    }

    ExperimentConfig cfg = preset_config(preset);
    for (const auto& [ln, key, value] : entries) {
        try {
            setters().find(key)->second(cfg, value);
        } catch (const std::invalid_argument& e) {
            errors.push_back("line " + std::to_string(ln) + ": " + key + ": " + e.what());
        }
    }
    if (!errors.empty()) throw ValidationError(std::move(errors));
    if (!seen.count("alpha") || !seen.count("beta")) {
        const auto t = HolderTargets::with_default_alpha_beta(cfg.kappa, cfg.lambda, cfg.p, cfg.theta, cfg.delta);
        if (!seen.count("alpha")) cfg.alpha = t.alpha;
        if (!seen.count("beta")) cfg.beta = t.beta;
    }
    if (auto v = config_violations(cfg); !v.empty()) throw ValidationError(std::move(v));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream s;
    const auto real_list = [](const std::vector<double>& v) { return join(v, fmt); };
    const auto size_list = [](const std::vector<std::size_t>& v) {
        return join(v, [](std::size_t x) { return std::to_string(x); });
    };
    s << "# problem\n";
    s << "a = " << real_list(c.a) << '\n';
    s << "b = " << real_list(c.b) << '\n';
    s << "c = " << real_list(c.c) << '\n';
    s << "xi = " << real_list(c.xi) << '\n';
    s << "noise = " << to_string(c.noise) << '\n';
    s << "lambda = " << fmt(c.lambda) << '\n';
    s << "u0 = " << c.u0 << '\n';
    s << "T = " << fmt(c.T) << '\n';
    s << "delta0 = " << fmt(c.delta0) << '\n';
    s << "K = " << fmt(c.K) << '\n';
    s << "\n# scheme\n";
    s << "N = " << c.N << '\n';
    s << "dt = " << fmt(c.dt) << '\n';
    s << "K_modes = " << c.K_modes << '\n';
    s << "m = " << fmt(c.m) << '\n';
    s << "snapshots = " << c.snapshots << '\n';
    s << "\n# estimation\n";
    s << "kappa = " << fmt(c.kappa) << '\n';
    s << "p = " << fmt(c.p) << '\n';
    s << "theta = " << fmt(c.theta) << '\n';
    s << "alpha = " << fmt(c.alpha) << '\n';
    s << "beta = " << fmt(c.beta) << '\n';
    s << "delta = " << fmt(c.delta) << '\n';
    s << "margin = " << fmt(c.margin) << '\n';
    s << "boundary_lo = " << fmt(c.boundary_lo) << '\n';
    s << "boundary_hi = " << fmt(c.boundary_hi) << '\n';
    s << "space_lags = " << size_list(c.space_lags) << '\n';
    s << "time_lags = " << size_list(c.time_lags) << '\n';
    s << "statistic = " << to_string(c.statistic) << '\n';
    s << "tolerance = " << fmt(c.tolerance) << '\n';
    s << "\n# ensemble\n";
    s << "paths = " << c.paths << '\n';
    s << "seed = " << c.seed << '\n';
    s << "workers = " << c.workers << '\n';
    s << "out = " << c.out << '\n';
    s << "persist = " << (c.persist ? "true" : "false") << '\n';
    return s.str();
}

}  // namespace spdelab

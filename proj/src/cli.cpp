#include "dthp/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>

#include "dthp/errors.hpp"
#include "dthp/exact.hpp"
#include "dthp/format.hpp"
#include "dthp/kernel.hpp"
#include "dthp/ldp.hpp"
#include "dthp/moments.hpp"
#include "dthp/risk.hpp"
#include "dthp/simulate.hpp"

namespace dthp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Thrown for malformed configuration; maps to kExitUsage.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files; // name, payload
    std::string console;
    std::optional<std::size_t> truncation_lag;
    int exit_code = kExitOk;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("malformed JSON in '" + path + "': " + e.what());
    }
}

template <class T>
T get_or(const json& config, const char* key, T fallback) {
    if (!config.contains(key) || config.at(key).is_null()) {
        return fallback;
    }
    try {
        return config.at(key).get<T>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("config field '") + key + "': " + e.what());
    }
}

template <class T>
T require_field(const json& config, const char* key) {
    if (!config.contains(key)) {
        throw UsageError(std::string("config is missing '") + key + "'");
    }
    return get_or<T>(config, key, T{});
}

ExcitingFunction load_kernel(const json& config) {
    if (!config.contains("kernel")) {
        throw UsageError("config is missing 'kernel'");
    }
    try {
        return kernel_from_json(config.at("kernel"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string line;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) {
            line += ',';
        }
        line += c;
        first = false;
    }
    line += '\n';
    return line;
}

std::string fmt(double v) { return format_double(v); }

json validation_json(const ExcitingFunction& kernel, const ValidationReport& report) {
    json out;
    out["kernel_fingerprint"] = kernel.fingerprint();
    out["passed"] = report.passed;
    out["excitation_mass"] = report.excitation_mass;
    out["total_mass"] = report.total_mass;
    out["first_moment"] = report.first_moment;
    if (report.passed) {
        out["limit_prob"] = limit_arrival_prob(kernel);
    }
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    out["checks"] = std::move(checks);
    return out;
}

Artifacts run_validate(const json& config) {
    const auto kernel = load_kernel(config);
    const auto report = validate(kernel);
    Artifacts a;
    a.console = validation_json(kernel, report).dump(2) + "\n";
    a.exit_code = report.passed ? kExitOk : kExitValidationFailure;
    return a;
}

Artifacts run_moments(const json& config) {
    const auto kernel = load_kernel(config);
    require_valid(kernel);
    const auto n = require_field<std::size_t>(config, "n");
    if (n == 0) {
        throw UsageError("--n must be >= 1");
    }
    const auto table = moment_table(kernel, n);
    // b_n for every row n = 1..horizon.
    const auto b = b_recursion(kernel, n + 1);
    std::string csv = "n,b_n,marginal,limit_prob,clt_variance\n";
    for (std::size_t k = 1; k <= n; ++k) {
        csv += csv_row({std::to_string(k), fmt(b[k - 1]), fmt(table.marginal[k - 1]),
                        fmt(table.limit_prob), fmt(table.clt_variance)});
    }
    Artifacts a;
    a.files.emplace_back("moments.csv", std::move(csv));
    std::ostringstream os;
    os << "limit_prob " << fmt(table.limit_prob) << "\nclt_variance " << fmt(table.clt_variance)
       << "\nmarginal_at_n " << fmt(table.marginal.back()) << "\nlimit_reached_at "
       << table.limit_reached_at << " (|marginal - limit| < " << fmt(kLimitReachedTolerance)
       << ", 0 = not reached)\n";
    a.console = os.str();
    return a;
}

Artifacts run_exact(const json& config) {
    const auto kernel = load_kernel(config);
    const auto n = require_field<std::size_t>(config, "n");
    EnumerationOptions options;
    options.workers = get_or<std::size_t>(config, "workers", 0);
    options.budget = get_or<std::uint64_t>(config, "max_states", kDefaultEnumerationBudget);
    const auto dist = enumerate_pmf(kernel, n, options);
    const auto checks = check_identities(kernel, dist);
    json out;
    out["n"] = n;
    out["pmf"] = dist.pmf;
    out["checks"] = {{"norm_err", checks.norm_err},
                     {"c0_err", checks.c0_err},
                     {"cnn_err", checks.cnn_err}};
    out["truncation_lag"] = dist.truncation_lag ? json(*dist.truncation_lag) : json(nullptr);
    out["kernel_fingerprint"] = dist.kernel_fingerprint;
    Artifacts a;
    a.truncation_lag = dist.truncation_lag;
    a.console = out.dump() + "\n";
    a.files.emplace_back("exact.json", a.console);
    return a;
}

Artifacts run_simulate(const json& config) {
    const auto kernel = load_kernel(config);
    const auto n = require_field<std::size_t>(config, "n");
    const auto paths = require_field<std::size_t>(config, "paths");
    const auto seed = require_field<std::uint64_t>(config, "seed");
    const auto retain = get_or<std::string>(config, "retain", "terminal");
    const auto format = get_or<std::string>(config, "format", "csv");
    if (retain != "terminal" && retain != "full") {
        throw UsageError("--retain must be terminal or full");
    }
    if (format != "csv" && format != "json") {
        throw UsageError("--out must be csv or json");
    }
    BatchOptions options;
    options.retention = retain == "full" ? Retention::full : Retention::terminal;
    options.workers = get_or<std::size_t>(config, "workers", 0);
    options.draw_budget = get_or<std::uint64_t>(config, "max_draws", kDefaultDrawBudget);
    const auto batch = simulate_batch(kernel, n, paths, seed, options);

    std::vector<double> fractions;
    fractions.reserve(paths);
    for (auto h : batch.terminal_counts) {
        fractions.push_back(static_cast<double>(h) / static_cast<double>(n));
    }
    const auto moments = sample_moments(fractions);

    std::string payload;
    if (format == "csv") {
        if (batch.retains_full()) {
            payload = "step,path_id,xi,lambda,H\n";
            for (std::size_t p = 0; p < paths; ++p) {
                std::uint64_t running = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    const auto idx = p * n + k;
                    running += batch.arrivals[idx];
                    payload += csv_row({std::to_string(k + 1), std::to_string(p),
                                        std::to_string(batch.arrivals[idx]),
                                        fmt(batch.intensity[idx]), std::to_string(running)});
                }
            }
        } else {
            payload = "path_id,H\n";
            for (std::size_t p = 0; p < paths; ++p) {
                payload += csv_row({std::to_string(p), std::to_string(batch.terminal_counts[p])});
            }
        }
    } else {
        json out;
        out["n"] = n;
        out["paths"] = paths;
        out["seed"] = seed;
        out["kernel_fingerprint"] = batch.kernel_fingerprint;
        out["terminal_counts"] = batch.terminal_counts;
        out["mean_fraction"] = moments.mean;
        if (batch.retains_full()) {
            json rows = json::array();
            for (std::size_t p = 0; p < paths; ++p) {
                const auto first = batch.arrivals.begin() + static_cast<std::ptrdiff_t>(p * n);
                const auto lfirst = batch.intensity.begin() + static_cast<std::ptrdiff_t>(p * n);
                rows.push_back({{"xi", std::vector<int>(first, first + static_cast<std::ptrdiff_t>(n))},
                                {"lambda", std::vector<double>(lfirst, lfirst + static_cast<std::ptrdiff_t>(n))}});
            }
            out["full_paths"] = std::move(rows);
        }
        payload = out.dump() + "\n";
    }
    Artifacts a;
    a.files.emplace_back("simulate." + format, std::move(payload));
    std::ostringstream os;
    os << "paths " << paths << "\nmean_H_over_n " << fmt(moments.mean) << "\nlimit_prob "
       << fmt(limit_arrival_prob(kernel)) << "\n";
    a.console = os.str();
    return a;
}

Artifacts run_ldp(const json& config) {
    const auto kernel = load_kernel(config);
    require_valid(kernel);
    const auto horizons = get_or<std::vector<std::size_t>>(config, "n", {});
    const auto method = get_or<std::string>(config, "method", "auto");
    const auto paths = get_or<std::size_t>(config, "paths", 100'000);
    const auto seed = get_or<std::uint64_t>(config, "seed", 0);
    const auto t_grid = uniform_grid(get_or<double>(config, "t_min", -4.0),
                                     get_or<double>(config, "t_max", 4.0),
                                     get_or<std::size_t>(config, "t_count", 401));
    const auto x_grid = uniform_grid(0.0, 1.0, get_or<std::size_t>(config, "x_count", 201));
    if (method != "auto" && method != "exact" && method != "mc") {
        throw UsageError("--method must be auto, exact or mc");
    }
    EnumerationOptions enumeration;
    enumeration.workers = get_or<std::size_t>(config, "workers", 0);
    enumeration.budget = get_or<std::uint64_t>(config, "max_states", kDefaultEnumerationBudget);
    MonteCarloOptions mc;
    mc.workers = enumeration.workers;
    mc.draw_budget = get_or<std::uint64_t>(config, "max_draws", kDefaultDrawBudget);

    Artifacts a;
    std::vector<MgfGrid> grids;
    for (auto n : horizons) {
        const bool exact = method == "exact" || (method == "auto" && n <= kMaxEnumerationHorizon);
        grids.push_back(exact ? gamma_exact(kernel, n, t_grid, enumeration)
                              : gamma_mc(kernel, n, t_grid, paths, seed, mc));
        if (grids.back().truncation_lag) {
            a.truncation_lag = grids.back().truncation_lag;
        }
    }
    const auto bounds = gamma_bounds(kernel);
    std::string header = "t,L,U";
    for (const auto& g : grids) {
        header += ",gamma_" + std::to_string(g.n);
    }
    std::string gamma_csv = header + "\n";
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        std::string line = fmt(t_grid[i]) + "," + fmt(bounds.lower(t_grid[i])) + "," +
                           fmt(bounds.upper(t_grid[i]));
        for (const auto& g : grids) {
            line += "," + fmt(g.values[i]);
        }
        gamma_csv += line + "\n";
    }
    const auto lstar =
        legendre([&](double t) { return bounds.lower(t); }, t_grid, x_grid, "L");
    const auto ustar =
        legendre([&](double t) { return bounds.upper(t); }, t_grid, x_grid, "U");
    std::string conj_csv = "x,Lstar,Ustar,Lstar_boundary,Ustar_boundary\n";
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        conj_csv += csv_row({fmt(x_grid[i]), fmt(lstar.values[i]), fmt(ustar.values[i]),
                             std::to_string(lstar.boundary[i]), std::to_string(ustar.boundary[i])});
    }
    a.files.emplace_back("ldp_gamma.csv", std::move(gamma_csv));
    a.files.emplace_back("ldp_conjugates.csv", std::move(conj_csv));
    std::ostringstream os;
    os << "limit_prob " << fmt(bounds.limit_prob) << "\ntotal_mass " << fmt(bounds.total_mass)
       << "\nt_points " << t_grid.size() << "\nx_points " << x_grid.size() << "\n";
    a.console = os.str();
    return a;
}

json band_json(const LdpRuinBand& band) {
    json out;
    out["n"] = band.n;
    out["threshold_fraction"] = band.threshold_fraction;
    out["empty_interval"] = band.empty_interval;
    out["below_premium_threshold"] = band.below_premium_threshold;
    out["inf_Ustar"] = band.inf_upper_conjugate;
    out["inf_Lstar"] = band.inf_lower_conjugate;
    out["prob_lower"] = band.prob_lower;
    out["prob_upper"] = band.prob_upper;
    out["chernoff_upper"] = band.chernoff_upper;
    out["exact"] = band.exact ? json(*band.exact) : json(nullptr);
    return out;
}

Artifacts run_risk(const json& config) {
    SurplusConfig sc;
    sc.kernel = load_kernel(config);
    sc.u = require_field<double>(config, "u");
    sc.p = require_field<double>(config, "p");
    sc.horizon = require_field<std::size_t>(config, "n");
    sc.paths = get_or<std::size_t>(config, "paths", 100'000);
    sc.seed = get_or<std::uint64_t>(config, "seed", 0);
    sc.workers = get_or<std::size_t>(config, "workers", 0);
    sc.draw_budget = get_or<std::uint64_t>(config, "max_draws", kDefaultDrawBudget);
    try {
        validate_config(sc);
    } catch (const InvalidKernel&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto report = monte_carlo_fan(sc);

    std::string csv = "step,mean,p5,p95\n";
    for (std::size_t k = 0; k < report.horizon; ++k) {
        csv += csv_row({std::to_string(k + 1), fmt(report.mean[k]), fmt(report.p5[k]),
                        fmt(report.p95[k])});
    }
    json summary;
    summary["drift_est"] = report.drift_estimate;
    summary["drift"] = report.drift;
    summary["threshold"] = report.premium_threshold;
    summary["ruin_freq"] = report.ruin_frequency;
    summary["ruin_std_error"] = report.ruin_std_error;
    summary["ruin_count"] = report.ruin_count;
    summary["paths"] = report.paths;
    summary["n"] = report.horizon;
    summary["ldp_band"] = report.ldp_band ? band_json(*report.ldp_band) : json(nullptr);

    Artifacts a;
    a.files.emplace_back("risk_fan.csv", std::move(csv));
    a.console = summary.dump(2) + "\n";
    a.files.emplace_back("risk_summary.json", summary.dump() + "\n");
    return a;
}

void write_file(const fs::path& path, const std::string& payload) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw UsageError("cannot write '" + path.string() + "'");
    }
    out << payload;
}

// Rejects budget overrides above the defaults unless acknowledged.
void check_budget_override(const json& config) {
    const bool acknowledged = get_or<bool>(config, "allow_over_budget", false);
    if (acknowledged) {
        return;
    }
    if (get_or<std::uint64_t>(config, "max_draws", kDefaultDrawBudget) > kDefaultDrawBudget ||
        get_or<std::uint64_t>(config, "max_states", kDefaultEnumerationBudget) >
            kDefaultEnumerationBudget) {
        throw UsageError("raising a budget above its default requires --allow-over-budget");
    }
}

} // namespace

fs::path default_out_dir() {
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return fs::current_path();
}

int run(const std::string& subcommand, const json& config, const fs::path& out_dir,
        std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    try {
        check_budget_override(config);
        Artifacts artifacts;
        if (subcommand == "validate") {
            artifacts = run_validate(config);
        } else if (subcommand == "moments") {
            artifacts = run_moments(config);
        } else if (subcommand == "exact") {
            artifacts = run_exact(config);
        } else if (subcommand == "simulate") {
            artifacts = run_simulate(config);
        } else if (subcommand == "ldp") {
            artifacts = run_ldp(config);
        } else if (subcommand == "risk") {
            artifacts = run_risk(config);
        } else {
            throw UsageError("unknown subcommand '" + subcommand + "'");
        }

        if (!artifacts.files.empty()) {
            fs::create_directories(out_dir);
            for (const auto& [name, payload] : artifacts.files) {
                write_file(out_dir / name, payload);
            }
            const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
            json manifest;
            manifest["tool"] = "dthp";
            manifest["version"] = kToolVersion;
            manifest["subcommand"] = subcommand;
            manifest["config"] = config;
            manifest["seed"] = config.contains("seed") ? config.at("seed") : json(nullptr);
            manifest["kernel_fingerprint"] = load_kernel(config).fingerprint();
            manifest["truncation_lag"] =
                artifacts.truncation_lag ? json(*artifacts.truncation_lag) : json(nullptr);
            json outputs = json::array();
            for (const auto& f : artifacts.files) {
                outputs.push_back(f.first);
            }
            manifest["outputs"] = std::move(outputs);
            manifest["duration_seconds"] = elapsed.count();
            write_file(out_dir / (subcommand + ".manifest.json"), manifest.dump(2) + "\n");
        }
        out << artifacts.console;
        return artifacts.exit_code;
    } catch (const InvalidKernel& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidationFailure;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitBudgetExceeded;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

namespace {

struct Common {
    std::string kernel_file;
    std::string out_dir;
    std::size_t workers = 0;
    std::uint64_t max_draws = kDefaultDrawBudget;
    std::uint64_t max_states = kDefaultEnumerationBudget;
    bool allow_over_budget = false;
};

void add_common(CLI::App* sub, Common& common, bool draws, bool states) {
    sub->add_option("--kernel", common.kernel_file, "Kernel JSON file")->required();
    sub->add_option("--out-dir", common.out_dir, "Output directory (default $DTHP_OUT_DIR or .)");
    sub->add_option("--workers", common.workers, "Worker threads (0 = all cores)");
    if (draws) {
        sub->add_option("--max-draws", common.max_draws, "Bernoulli draw budget");
    }
    if (states) {
        sub->add_option("--max-states", common.max_states, "Enumeration state budget");
    }
    if (draws || states) {
        sub->add_flag("--allow-over-budget", common.allow_over_budget,
                      "Acknowledge a budget above the default");
    }
}

json common_config(const Common& common) {
    json config;
    config["kernel"] = read_json_file(common.kernel_file);
    config["workers"] = common.workers;
    config["max_draws"] = common.max_draws;
    config["max_states"] = common.max_states;
    config["allow_over_budget"] = common.allow_over_budget;
    return config;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-time Hawkes process toolkit", "dthp"};
    app.require_subcommand(0, 1);
    std::string manifest_path;
    std::string replay_out_dir;
    app.add_option("--manifest", manifest_path, "Replay a run manifest");
    app.add_option("--out-dir", replay_out_dir, "Output directory for manifest replay");

    Common common;
    std::size_t n = 0;
    std::vector<std::size_t> horizons;
    std::size_t paths = 100'000;
    std::uint64_t seed = 0;
    std::string retain = "terminal";
    std::string format = "csv";
    std::string method = "auto";
    double t_min = -4.0;
    double t_max = 4.0;
    std::size_t t_count = 401;
    std::size_t x_count = 201;
    double u = 0.0;
    double p = 0.0;

    auto* validate_cmd = app.add_subcommand("validate", "Check an exciting function");
    validate_cmd->add_option("--kernel", common.kernel_file, "Kernel JSON file")->required();

    auto* moments_cmd = app.add_subcommand("moments", "b_n recursion and marginal probabilities");
    add_common(moments_cmd, common, false, false);
    moments_cmd->add_option("--n", n, "Horizon")->required();

    auto* exact_cmd = app.add_subcommand("exact", "Exact pmf of H_n by enumeration");
    add_common(exact_cmd, common, false, true);
    exact_cmd->add_option("--n", n, "Horizon (<= 22)")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo paths");
    add_common(simulate_cmd, common, true, false);
    simulate_cmd->add_option("--n", n, "Horizon")->required();
    simulate_cmd->add_option("--paths", paths, "Number of paths")->required();
    simulate_cmd->add_option("--seed", seed, "Batch seed")->required();
    simulate_cmd->add_option("--retain", retain, "terminal | full");
    simulate_cmd->add_option("--out", format, "csv | json");

    auto* ldp_cmd = app.add_subcommand("ldp", "Scaled log-MGF, bounds and conjugates");
    add_common(ldp_cmd, common, true, true);
    ldp_cmd->add_option("--n", horizons, "Horizons for Gamma_n columns");
    ldp_cmd->add_option("--method", method, "auto | exact | mc");
    ldp_cmd->add_option("--paths", paths, "Monte Carlo paths");
    ldp_cmd->add_option("--seed", seed, "Monte Carlo seed");
    ldp_cmd->add_option("--t-min", t_min);
    ldp_cmd->add_option("--t-max", t_max);
    ldp_cmd->add_option("--t-count", t_count);
    ldp_cmd->add_option("--x-count", x_count);

    auto* risk_cmd = app.add_subcommand("risk", "Surplus process fan and ruin analysis");
    add_common(risk_cmd, common, true, false);
    risk_cmd->add_option("--u", u, "Initial surplus in (0,1)")->required();
    risk_cmd->add_option("--p", p, "Premium per step in (0,1)")->required();
    risk_cmd->add_option("--n", n, "Horizon")->required();
    risk_cmd->add_option("--paths", paths, "Number of paths");
    risk_cmd->add_option("--seed", seed, "Batch seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back(); // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (!manifest_path.empty()) {
            if (!app.get_subcommands().empty()) {
                throw UsageError("--manifest cannot be combined with a subcommand");
            }
            const auto manifest = read_json_file(manifest_path);
            if (!manifest.contains("subcommand") || !manifest.contains("config")) {
                throw UsageError("manifest lacks 'subcommand' or 'config'");
            }
            const auto sub = manifest.at("subcommand").get<std::string>();
            const fs::path dir = !replay_out_dir.empty() ? fs::path(replay_out_dir)
                                 : manifest.at("config").contains("out_dir")
                                     ? fs::path(manifest.at("config").at("out_dir").get<std::string>())
                                     : default_out_dir();
            return run(sub, manifest.at("config"), dir, out, err);
        }
        if (app.get_subcommands().empty()) {
            err << app.help();
            return kExitUsage;
        }
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        json config;
        if (name == "validate") {
            config["kernel"] = read_json_file(common.kernel_file);
        } else {
            config = common_config(common);
        }
        if (name == "moments" || name == "exact") {
            config["n"] = n;
        } else if (name == "simulate") {
            config["n"] = n;
            config["paths"] = paths;
            config["seed"] = seed;
            config["retain"] = retain;
            config["format"] = format;
        } else if (name == "ldp") {
            config["n"] = horizons;
            config["method"] = method;
            config["paths"] = paths;
            config["seed"] = seed;
            config["t_min"] = t_min;
            config["t_max"] = t_max;
            config["t_count"] = t_count;
            config["x_count"] = x_count;
        } else if (name == "risk") {
            config["u"] = u;
            config["p"] = p;
            config["n"] = n;
            config["paths"] = paths;
            config["seed"] = seed;
        }
        const fs::path dir = common.out_dir.empty() ? default_out_dir() : fs::path(common.out_dir);
        if (name != "validate") {
            config["out_dir"] = dir.string();
        }
        return run(name, config, dir, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace dthp::cli

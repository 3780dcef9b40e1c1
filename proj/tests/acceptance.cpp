// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Seeds are fixed constants.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "dthp/cli.hpp"
#include "dthp/exact.hpp"
#include "dthp/format.hpp"
#include "dthp/ldp.hpp"
#include "dthp/moments.hpp"
#include "dthp/risk.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using dthp::ExcitingFunction;
using nlohmann::json;

namespace {

const ExcitingFunction reference = ExcitingFunction::geometric(0.2, 0.3, 0.5);
const json reference_json = {{"a0", 0.2}, {"form", "geometric"}, {"alpha", 0.3}, {"rho", 0.5}};

constexpr std::uint64_t kSllnSeed = 42;
constexpr std::uint64_t kCltSeed = 42;
constexpr std::uint64_t kRiskSeed = 7;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("missing output " + p.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Columns of a CSV file keyed by header name.
std::map<std::string, std::vector<double>> read_csv(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    {
        std::istringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) {
            names.push_back(cell);
        }
    }
    std::map<std::string, std::vector<double>> cols;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        for (std::size_t i = 0; std::getline(row, cell, ','); ++i) {
            cols[names.at(i)].push_back(std::stod(cell));
        }
    }
    return cols;
}

// Runs a subcommand through the CLI and returns the payload files it wrote,
// concatenated in output order.
std::string run_cli(const std::string& sub, json config, const fs::path& dir) {
    config["kernel"] = reference_json;
    std::ostringstream out;
    std::ostringstream err;
    const int code = dthp::cli::run(sub, config, dir, out, err);
    if (code != 0) {
        throw std::runtime_error(sub + " exited with " + std::to_string(code) + ": " + err.str());
    }
    const auto manifest = json::parse(slurp(dir / (sub + ".manifest.json")));
    std::string payload;
    for (const auto& name : manifest.at("outputs")) {
        payload += "== " + name.get<std::string>() + "\n" + slurp(dir / name.get<std::string>());
    }
    return payload;
}

json slln_config(std::size_t workers) {
    return {{"n", 2000}, {"paths", 10000}, {"seed", kSllnSeed}, {"retain", "terminal"},
            {"format", "csv"}, {"workers", workers}};
}

json clt_config(std::size_t workers) {
    return {{"n", 5000}, {"paths", 100000}, {"seed", kCltSeed}, {"retain", "terminal"},
            {"format", "csv"}, {"workers", workers}};
}

json risk_config(double p, std::size_t n, std::size_t workers) {
    return {{"u", 0.6}, {"p", p}, {"n", n}, {"paths", 100000}, {"seed", kRiskSeed}, {"workers", workers}};
}

struct Workspace {
    fs::path root;
    std::map<std::string, std::string> first_payloads; // criteria 9-12 runs
    Workspace() {
        root = fs::temp_directory_path() / ("dthp_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(root);
    }
    ~Workspace() { fs::remove_all(root); }
    fs::path dir(const std::string& name) const { return root / name; }
};

Outcome exact_identities() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::size_t n : {4U, 8U, 12U, 14U}) {
        const auto dist = dthp::enumerate_pmf(reference, n);
        double sum = 0.0;
        for (double c : dist.pmf) {
            sum += c;
        }
        // prod_{k<n} (a_0 + ... + a_k), built from the raw weights
        double level = 0.2;
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) {
                level += 0.3 * std::pow(0.5, static_cast<double>(k - 1));
            }
            prod *= level;
        }
        worst = std::max({worst, std::abs(sum - 1.0), std::abs(dist.pmf[0] - std::pow(0.8, n)),
                          std::abs(dist.pmf[n] - prod)});
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1e-12 && elapsed <= 30.0,
            "max identity error " + num(worst) + ", " + num(elapsed) + " s"};
}

Outcome marginals_vs_enumeration() {
    const auto enumerated = dthp::exact_marginals(reference, 14);
    const auto recursion = dthp::marginal_probs(reference, 14);
    double worst = 0.0;
    for (std::size_t k = 0; k < 14; ++k) {
        worst = std::max(worst, std::abs(recursion[k] - enumerated[k]));
    }
    const double b2 = dthp::b_recursion(reference, 3)[1];
    const double e3 = dthp::marginal_prob(reference, 3);
    return {worst <= 1e-12 && b2 == 0.24 && e3 == 0.308,
            "max |recursion - enumeration| " + num(worst) + ", b_2 = " + dthp::format_double(b2) +
                ", E(xi_3) = " + dthp::format_double(e3)};
}

Outcome marginal_monotone_limit() {
    const auto m = dthp::marginal_probs(reference, 201);
    const auto gaps = dthp::limit_gaps(reference, 201);
    bool ok = true;
    std::size_t saturated_at = 0;
    for (std::size_t n = 1; n < m.size(); ++n) {
        // E(xi_{n+1}) > E(xi_n) iff gap_{n+1} < gap_n; the gap keeps full
        // relative precision after the double value of E(xi_n) reaches 0.5.
        ok = ok && gaps[n] > 0.0 && gaps[n] < gaps[n - 1] && m[n] >= m[n - 1];
        if (saturated_at == 0 && !(m[n] > m[n - 1])) {
            saturated_at = n + 1;
        }
    }
    const double dist = std::abs(dthp::marginal_prob(reference, 200) - 0.5);
    ok = ok && dist < 1e-3;
    std::string detail = "|E(xi_200) - 0.5| = " + num(dist) + ", gap_201 = " + num(gaps[200]);
    if (saturated_at != 0) {
        detail += ", double value equals 0.5 from n = " + std::to_string(saturated_at);
    }
    return {ok, detail};
}

Outcome association() {
    const std::size_t n = 12;
    const auto cov = dthp::exact_covariance_matrix(reference, n);
    double lowest = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            lowest = std::min(lowest, cov[i * n + j]);
        }
    }
    return {lowest >= -1e-12, "min Cov[xi_i, xi_j] = " + num(lowest)};
}

Outcome mgf_envelopes() {
    const std::vector<double> ts{-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0};
    const double slack = 1e-10;
    double worst = -INFINITY; // largest violation
    std::vector<dthp::ExactDistribution> dists;
    for (std::size_t n = 1; n <= 14; ++n) {
        dists.push_back(dthp::enumerate_pmf(reference, n));
    }
    for (std::size_t n = 1; n <= 13; ++n) {
        const auto& d = dists[n - 1];
        const auto& d1 = dists[n];
        for (double t : ts) {
            const double gamma = dthp::exact_log_mgf(d, t) / static_cast<double>(n);
            const double upper = t < 0 ? std::log(1 + std::expm1(t) * 0.2) : std::log(1 + std::expm1(t) * 0.8);
            worst = std::max(worst, gamma - upper);
            if (t < 0) {
                worst = std::max(worst, dthp::exact_mgf(d1, t) - dthp::exact_mgf(d, t));
            } else {
                worst = std::max(worst, std::log(1 + std::expm1(t) * 0.2) - gamma);
            }
        }
    }
    return {worst <= slack, "largest violation " + num(worst)};
}

Outcome bound_landmarks() {
    const auto b = dthp::gamma_bounds(reference);
    const double ln2 = std::log(2.0);
    double worst = std::max({std::abs(b.lower(ln2) - std::log(1.5)), std::abs(b.upper(ln2) - std::log(1.8)),
                             std::abs(b.lower(0.0)), std::abs(b.upper(0.0))});
    // Crossover: the last t at which L sits on its floor log(1 - a_0).
    const double floor = std::log1p(-0.2);
    double lo = -2.0;
    double hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (b.lower(mid) > floor ? hi : lo) = mid;
    }
    const double crossover_err = std::abs(lo - std::log(0.6));
    worst = std::max(worst, crossover_err);
    return {worst <= 1e-12, "max landmark error " + num(worst) + " (crossover at " + dthp::format_double(lo) + ")"};
}

Outcome legendre_checks() {
    const auto t = dthp::default_t_grid();
    const std::vector<double> x09{0.9};
    auto u_pos = [](double s) { return std::log(1 + std::expm1(s) * 0.8); };
    auto l_pos = [](double s) { return std::log(1 + std::expm1(s) * 0.5); };
    const double numeric = dthp::legendre(u_pos, t, x09, "U+").values[0];
    const double closed = 0.9 * std::log(0.9 / 0.8) + 0.1 * std::log(0.1 / 0.2);
    const double brute = oracle::fine_grid_conjugate(u_pos, 0.9, 0.0, 4.0, 4'000'001);
    const double err = std::max(std::abs(numeric - closed), std::abs(numeric - brute));

    const std::vector<double> half{0.5};
    const std::vector<double> s08{0.8};
    const auto b = dthp::gamma_bounds(reference);
    auto lower = [&](double s) { return b.lower(s); };
    auto upper = [&](double s) { return b.upper(s); };
    const double at_means = std::max({std::abs(dthp::legendre(l_pos, t, half, "L+").values[0]),
                                      std::abs(dthp::legendre(u_pos, t, s08, "U+").values[0]),
                                      std::abs(dthp::legendre(lower, t, half, "L").values[0])});
    const auto xs = dthp::default_x_grid();
    const auto ls = dthp::legendre(lower, t, xs, "L");
    const auto us = dthp::legendre(upper, t, xs, "U");
    double order = -INFINITY;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isfinite(ls.values[i]) && std::isfinite(us.values[i])) {
            order = std::max(order, us.values[i] - ls.values[i]);
        }
    }
    return {err <= 1e-6 && at_means <= 1e-10 && order <= 0.0,
            "U*(0.9) = " + dthp::format_double(numeric) + " vs KL " + dthp::format_double(closed) +
                ", at-mean " + num(at_means) + ", max(U* - L*) " + num(order)};
}

Outcome chernoff_vs_exact() {
    double worst = -INFINITY;
    for (std::size_t n = 1; n <= 14; ++n) {
        const auto d = dthp::enumerate_pmf(reference, n);
        for (double a : {0.6, 0.7, 0.8, 0.9, 1.0}) {
            const double tail = dthp::exact_upper_tail(d, dthp::count_threshold(n, a));
            worst = std::max(worst, std::log(tail) / static_cast<double>(n) - dthp::chernoff_tail(reference, n, a));
        }
    }
    return {worst <= 1e-12, "max (1/n) log P - chernoff_tail = " + num(worst)};
}

Outcome slln(Workspace& ws) {
    const auto start = std::chrono::steady_clock::now();
    const auto dir = ws.dir("c9");
    ws.first_payloads["c9"] = run_cli("simulate", slln_config(1), dir);
    const auto h = read_csv(dir / "simulate.csv").at("H");
    double mean = 0.0;
    for (double v : h) {
        mean += v / 2000.0;
    }
    mean /= static_cast<double>(h.size());
    const double elapsed = seconds_since(start);
    return {h.size() == 10000 && std::abs(mean - 0.5) <= 0.01 && elapsed <= 20.0,
            "mean H_n/n = " + num(mean) + ", " + num(elapsed) + " s"};
}

Outcome clt(Workspace& ws) {
    const auto start = std::chrono::steady_clock::now();
    const auto dir = ws.dir("c10");
    ws.first_payloads["c10"] = run_cli("simulate", clt_config(1), dir);
    const auto h = read_csv(dir / "simulate.csv").at("H");
    std::vector<double> stat;
    stat.reserve(h.size());
    for (double v : h) {
        stat.push_back((v - 0.5 * 5000) / std::sqrt(5000.0));
    }
    const auto m = dthp::sample_moments(stat);
    const double elapsed = seconds_since(start);
    const double rel = std::abs(m.variance - 1.5625) / 1.5625;
    return {h.size() == 100000 && rel <= 0.10 && std::abs(m.mean) <= 0.02 && elapsed <= 120.0,
            "variance " + num(m.variance) + " (rel err " + num(rel) + "), mean " + num(m.mean) + ", " +
                num(elapsed) + " s"};
}

Outcome surplus_drift(Workspace& ws) {
    std::string detail;
    bool ok = true;
    for (double p : {0.6, 0.4}) {
        const auto start = std::chrono::steady_clock::now();
        const std::string key = p > 0.5 ? "c11_up" : "c11_down";
        const auto dir = ws.dir(key);
        ws.first_payloads[key] = run_cli("risk", risk_config(p, 500, 1), dir);
        const auto fan = read_csv(dir / "risk_fan.csv");
        const auto summary = json::parse(slurp(dir / "risk_summary.json"));
        const double elapsed = seconds_since(start);
        const auto& mean = fan.at("mean");
        const auto& p5 = fan.at("p5");
        const auto& p95 = fan.at("p95");
        bool ordered = mean.size() == 500;
        double min_mean = INFINITY;
        for (std::size_t k = 0; k < mean.size(); ++k) {
            ordered = ordered && p5[k] <= mean[k] && mean[k] <= p95[k];
            min_mean = std::min(min_mean, mean[k]);
        }
        const double slope = summary.at("drift_est").get<double>();
        const double target = p > 0.5 ? 0.1 : -0.1;
        const bool sign_ok = p > 0.5 ? min_mean > 0.0 : min_mean < 0.0;
        ok = ok && ordered && std::abs(slope - target) <= 0.01 && sign_ok && elapsed <= 60.0;
        detail += (detail.empty() ? "" : "; ") + std::string("p=") + num(p) + " slope " + num(slope) +
                  ", min mean " + num(min_mean) + (ordered ? ", fan ordered" : ", FAN UNORDERED") + ", " +
                  num(elapsed) + " s";
    }
    return {ok, detail};
}

Outcome small_horizon_ruin(Workspace& ws) {
    const auto dir = ws.dir("c12");
    ws.first_payloads["c12"] = run_cli("risk", risk_config(0.6, 12, 1), dir);
    const auto summary = json::parse(slurp(dir / "risk_summary.json"));
    const double freq = summary.at("ruin_freq").get<double>();
    const double se = summary.at("ruin_std_error").get<double>();
    const double exact = dthp::exact_ruin_probability(reference, 12, 0.6, 0.6);
    return {se > 0.0 && std::abs(freq - exact) <= 5 * se,
            "MC " + num(freq) + " vs exact " + num(exact) + " (" + num(std::abs(freq - exact) / se) + " SE)"};
}

Outcome determinism(Workspace& ws) {
    struct Job {
        std::string key;
        std::string sub;
        std::function<json(std::size_t)> config;
    };
    const std::vector<Job> jobs{
        {"c9", "simulate", slln_config},
        {"c10", "simulate", clt_config},
        {"c11_up", "risk", [](std::size_t w) { return risk_config(0.6, 500, w); }},
        {"c11_down", "risk", [](std::size_t w) { return risk_config(0.4, 500, w); }},
        {"c12", "risk", [](std::size_t w) { return risk_config(0.6, 12, w); }},
    };
    bool ok = true;
    std::string mismatches;
    for (const auto& job : jobs) {
        const auto it = ws.first_payloads.find(job.key);
        if (it == ws.first_payloads.end()) {
            ok = false;
            mismatches += " " + job.key + "(no first run)";
            continue;
        }
        const auto again = run_cli(job.sub, job.config(1), ws.dir(job.key + "_w1"));
        const auto eight = run_cli(job.sub, job.config(8), ws.dir(job.key + "_w8"));
        if (again != it->second) {
            ok = false;
            mismatches += " " + job.key + "(rerun)";
        }
        if (eight != it->second) {
            ok = false;
            mismatches += " " + job.key + "(workers 8)";
        }
    }
    return {ok, ok ? "payloads of criteria 9-12 identical across reruns and workers {1, 8}"
                   : "mismatch:" + mismatches};
}

} // namespace

int main() {
    Workspace ws;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact enumeration identities", exact_identities},
        {"moment recursion vs enumeration", marginals_vs_enumeration},
        {"marginal monotone convergence", marginal_monotone_limit},
        {"nonnegative covariances", association},
        {"MGF monotonicity and envelopes", mgf_envelopes},
        {"limit-function bound landmarks", bound_landmarks},
        {"Legendre transform correctness", legendre_checks},
        {"Chernoff bound vs exact tail", chernoff_vs_exact},
        {"law of large numbers (Monte Carlo)", [&] { return slln(ws); }},
        {"central limit variance (Monte Carlo)", [&] { return clt(ws); }},
        {"surplus drift and fan ordering", [&] { return surplus_drift(ws); }},
        {"small-horizon ruin vs enumeration", [&] { return small_horizon_ruin(ws); }},
        {"determinism across runs and workers", [&] { return determinism(ws); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failures += outcome.pass ? 0 : 1;
        std::printf("%s criterion %zu: %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

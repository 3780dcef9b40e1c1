#include "dthp/risk.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dthp/history_walker.hpp"
#include "dthp/ldp.hpp"
#include "dthp/moments.hpp"

namespace dthp {

void validate_config(const SurplusConfig& config) {
    if (!(config.u > 0.0 && config.u < 1.0)) {
        throw std::invalid_argument("initial surplus u must lie in (0, 1)");
    }
    if (!(config.p > 0.0 && config.p < 1.0)) {
        throw std::invalid_argument("premium p must lie in (0, 1)");
    }
    if (config.horizon == 0) {
        throw std::invalid_argument("horizon must be >= 1");
    }
    require_valid(config.kernel);
}

std::vector<double> surplus_from_arrivals(double u, double p, std::span<const std::uint8_t> arrivals) {
    std::vector<double> out;
    out.reserve(arrivals.size());
    std::uint64_t claims = 0;
    for (std::size_t k = 0; k < arrivals.size(); ++k) {
        claims += arrivals[k];
        out.push_back(surplus_value(u, p, k + 1, claims));
    }
    return out;
}

std::vector<double> surplus_path(const SurplusConfig& config, std::uint64_t path_seed) {
    validate_config(config);
    const auto path = simulate_path(config.kernel, config.horizon, path_seed);
    return surplus_from_arrivals(config.u, config.p, path.arrivals);
}

double premium_threshold(const ExcitingFunction& kernel) { return limit_arrival_prob(kernel); }

double long_run_drift(const ExcitingFunction& kernel, double p) {
    return p - premium_threshold(kernel);
}

std::uint64_t ruin_claim_count(double u, double p, std::size_t n) {
    const double level = u + static_cast<double>(n) * p;
    return static_cast<std::uint64_t>(std::floor(level + kRuinTolerance)) + 1;
}

double exact_terminal_ruin_probability(const ExcitingFunction& kernel, std::size_t n, double u,
                                       double p, const EnumerationOptions& options) {
    const auto dist = enumerate_pmf(kernel, n, options);
    const auto count = ruin_claim_count(u, p, n);
    return count > n ? 0.0 : exact_upper_tail(dist, static_cast<std::size_t>(count));
}

namespace {

struct RuinAccumulator {
    std::size_t n = 0;
    double u = 0.0;
    double p = 0.0;
    CompensatedSum ruined;

    void operator()(std::uint32_t bits, double prob) {
        std::uint64_t claims = 0;
        for (std::size_t k = 0; k < n; ++k) {
            claims += (bits >> k) & 1U;
            if (is_ruined(surplus_value(u, p, k + 1, claims))) {
                ruined.add(prob);
                return;
            }
        }
    }
    void merge(const RuinAccumulator& other) { ruined.merge(other.ruined); }
};

// Per-step histogram of H_k plus the ruin count; every field merges by
// integer addition.
struct FanAccumulator {
    std::size_t n = 0;
    double u = 0.0;
    double p = 0.0;
    std::vector<std::uint32_t> histogram; // n x (n + 1), row k-1 holds H_k
    std::uint64_t ruin_count = 0;
    std::uint64_t claims = 0;
    bool ruined = false;

    void begin_path(std::size_t /*path_index*/) {
        claims = 0;
        ruined = false;
    }
    void step(std::size_t k, bool arrival, double /*intensity*/) {
        claims += arrival ? 1U : 0U;
        ++histogram[(k - 1) * (n + 1) + claims];
        ruined = ruined || is_ruined(surplus_value(u, p, k, claims));
    }
    void end_path() { ruin_count += ruined ? 1U : 0U; }
    void merge(const FanAccumulator& other) {
        for (std::size_t i = 0; i < histogram.size(); ++i) {
            histogram[i] += other.histogram[i];
        }
        ruin_count += other.ruin_count;
    }
};

// Surplus at nearest rank ceil(q P) in ascending order; ascending surplus is
// descending claim count.
double surplus_percentile(std::span<const std::uint32_t> row, std::size_t k, double u, double p,
                          std::size_t paths, double q) {
    const auto rank = static_cast<std::uint64_t>(
        std::max(1.0, std::ceil(q * static_cast<double>(paths) - 1e-9)));
    std::uint64_t seen = 0;
    for (std::size_t h = row.size(); h-- > 0;) {
        seen += row[h];
        if (seen >= rank) {
            return surplus_value(u, p, k, h);
        }
    }
    return surplus_value(u, p, k, 0);
}

} // namespace

double exact_ruin_probability(const ExcitingFunction& kernel, std::size_t n, double u, double p,
                              const EnumerationOptions& options) {
    const HistoryWalker walker(kernel, n, options.budget);
    const auto acc = walk_parallel(walker, options.workers, RuinAccumulator{n, u, p, {}});
    return acc.ruined.value();
}

double late_window_slope(std::span<const double> values, double window_fraction) {
    const std::size_t total = values.size();
    const auto window = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::floor(window_fraction * static_cast<double>(total))));
    if (total < 2 || window > total) {
        throw std::invalid_argument("late_window_slope: need at least two points in the window");
    }
    const std::size_t first = total - window;
    double mean_k = 0.0;
    double mean_v = 0.0;
    for (std::size_t i = first; i < total; ++i) {
        mean_k += static_cast<double>(i + 1);
        mean_v += values[i];
    }
    mean_k /= static_cast<double>(window);
    mean_v /= static_cast<double>(window);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = first; i < total; ++i) {
        const double dk = static_cast<double>(i + 1) - mean_k;
        sxy += dk * (values[i] - mean_v);
        sxx += dk * dk;
    }
    return sxy / sxx;
}

RuinReport monte_carlo_fan(const SurplusConfig& config) {
    validate_config(config);
    const std::size_t n = config.horizon;
    check_draw_budget(n, config.paths, config.draw_budget);
    FanAccumulator seed_acc{n, config.u, config.p, std::vector<std::uint32_t>(n * (n + 1), 0)};
    const auto acc = for_each_path(config.kernel, n, config.paths, config.seed, config.workers,
                                   seed_acc, config.draw_budget);

    RuinReport report;
    report.horizon = n;
    report.paths = config.paths;
    report.seed = config.seed;
    report.mean.reserve(n);
    report.p5.reserve(n);
    report.median.reserve(n);
    report.p95.reserve(n);
    const auto paths = static_cast<double>(config.paths);
    for (std::size_t k = 1; k <= n; ++k) {
        const std::span<const std::uint32_t> row(acc.histogram.data() + (k - 1) * (n + 1), n + 1);
        std::uint64_t claim_total = 0;
        for (std::size_t h = 0; h <= k; ++h) {
            claim_total += static_cast<std::uint64_t>(row[h]) * h;
        }
        report.mean.push_back(config.u + static_cast<double>(k) * config.p -
                              static_cast<double>(claim_total) / paths);
        report.p5.push_back(surplus_percentile(row, k, config.u, config.p, config.paths, 0.05));
        report.median.push_back(surplus_percentile(row, k, config.u, config.p, config.paths, 0.5));
        report.p95.push_back(surplus_percentile(row, k, config.u, config.p, config.paths, 0.95));
    }
    report.ruin_count = acc.ruin_count;
    report.ruin_frequency = static_cast<double>(acc.ruin_count) / paths;
    report.ruin_std_error =
        std::sqrt(report.ruin_frequency * (1.0 - report.ruin_frequency) / paths);
    report.premium_threshold = premium_threshold(config.kernel);
    report.drift = config.p - report.premium_threshold;
    report.drift_estimate = n >= 4 ? late_window_slope(report.mean) : 0.0;
    report.ldp_band = ldp_ruin_band(config, n);
    return report;
}

namespace {

// Conjugates of both bounds attain their suprema inside this grid for x in
// [0.01, 1 - 1e-9] whenever a_0 and the total mass lie in [1e-3, 0.999].
std::vector<double> band_t_grid() { return uniform_grid(-40.0, 40.0, 1601); }

// Conjugate at a single point.
double conjugate_at(const std::function<double(double)>& f, const std::vector<double>& t_grid,
                    double x) {
    const std::vector<double> xs{x};
    return legendre(f, t_grid, xs, "bound").values.front();
}

// inf of a convex function on [lo, hi] by golden section.
double convex_inf(const std::function<double(double)>& g, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double gc = g(c);
    double gd = g(d);
    for (int iter = 0; iter < 80 && (b - a) > 1e-12; ++iter) {
        if (gc <= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kInvPhi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kInvPhi * (b - a);
            gd = g(d);
        }
    }
    return std::min({gc, gd, g(lo), g(hi)});
}

} // namespace

LdpRuinBand ldp_ruin_band(const SurplusConfig& config, std::size_t n,
                          const EnumerationOptions& enumeration) {
    validate_config(config);
    if (n == 0) {
        throw std::invalid_argument("ldp_ruin_band: n must be >= 1");
    }
    LdpRuinBand band;
    band.n = n;
    band.threshold_fraction = config.u / static_cast<double>(n) + config.p;
    band.below_premium_threshold = config.p <= premium_threshold(config.kernel);
    if (band.threshold_fraction >= 1.0) {
        band.empty_interval = true;
        band.exact = 0.0;
        return band;
    }
    const auto& kernel = config.kernel;
    const auto t_grid = band_t_grid();
    const auto bounds = gamma_bounds(kernel);
    const std::function<double(double)> upper = [&](double t) { return bounds.upper(t); };
    const std::function<double(double)> lower = [&](double t) { return bounds.lower(t); };
    // Conjugates are finite on [0, 1]; the open right end contributes its limit.
    const double lo = band.threshold_fraction;
    const double hi = 1.0;
    band.inf_upper_conjugate =
        std::max(0.0, convex_inf([&](double x) { return conjugate_at(upper, t_grid, x); }, lo, hi));
    band.inf_lower_conjugate =
        std::max(0.0, convex_inf([&](double x) { return conjugate_at(lower, t_grid, x); }, lo, hi));
    const auto nd = static_cast<double>(n);
    band.prob_lower = std::exp(-nd * band.inf_lower_conjugate);
    band.prob_upper = std::exp(-nd * band.inf_upper_conjugate);
    band.chernoff_upper = chernoff_bound(kernel, n, band.threshold_fraction);
    if (n <= kMaxEnumerationHorizon && (std::uint64_t{1} << n) <= enumeration.budget) {
        band.exact = exact_terminal_ruin_probability(kernel, n, config.u, config.p, enumeration);
    }
    return band;
}

} // namespace dthp

#include "dthp/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dthp/moments.hpp"
#include "dthp/rng.hpp"

namespace dthp {

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
    if (count < 2 || !(hi > lo)) {
        throw std::invalid_argument("uniform_grid: need count >= 2 and hi > lo");
    }
    std::vector<double> grid(count);
    const auto span = hi - lo;
    const auto last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = lo + span * static_cast<double>(i) / last;
    }
    grid.back() = hi;
    return grid;
}

std::vector<double> default_t_grid() { return uniform_grid(-4.0, 4.0, 401); }

std::vector<double> default_x_grid() { return uniform_grid(0.0, 1.0, 201); }

double bernoulli_cgf(double p, double t) { return std::log1p(std::expm1(t) * p); }

double bernoulli_kl(double x, double p) {
    auto term = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); };
    return term(x, p) + term(1.0 - x, 1.0 - p);
}

GammaBounds gamma_bounds(const ExcitingFunction& kernel) {
    GammaBounds b;
    b.base_rate = kernel.base_rate();
    b.limit_prob = limit_arrival_prob(kernel);
    b.total_mass = kernel.total_mass();
    return b;
}

double GammaBounds::lower(double t) const {
    const double value = bernoulli_cgf(limit_prob, t);
    if (t >= 0.0) {
        return value;
    }
    return std::max(value, std::log1p(-base_rate));
}

double GammaBounds::upper(double t) const {
    const double mass = t >= 0.0 ? total_mass : base_rate;
    // Both branches keep the argument above 1 - a_0 > 0.
    if (!(1.0 + std::expm1(t) * mass > 0.0)) {
        throw InvariantViolation("upper bound: logarithm argument is not positive");
    }
    return bernoulli_cgf(mass, t);
}

double bound_L(const ExcitingFunction& kernel, double t) { return gamma_bounds(kernel).lower(t); }

double bound_U(const ExcitingFunction& kernel, double t) { return gamma_bounds(kernel).upper(t); }

namespace {

void require_grid(std::span<const double> grid, const char* what) {
    if (grid.empty()) {
        throw std::invalid_argument(std::string(what) + " must not be empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw std::invalid_argument(std::string(what) + " must be finite and strictly increasing");
        }
    }
}

// log( (1/P) sum_r count_r e^{t r} ), counts indexed by r.
double log_mean_exp(std::span<const std::uint64_t> counts, std::uint64_t total, double t) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r] > 0) {
            peak = std::max(peak, std::log(static_cast<double>(counts[r])) + t * static_cast<double>(r));
        }
    }
    double sum = 0.0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r] > 0) {
            sum += std::exp(std::log(static_cast<double>(counts[r])) + t * static_cast<double>(r) - peak);
        }
    }
    return peak + std::log(sum) - std::log(static_cast<double>(total));
}

constexpr std::uint64_t kBootstrapStream = 0xB0075742A9D1E5C3ULL;

} // namespace

MgfGrid gamma_exact(const ExcitingFunction& kernel, std::size_t n, std::span<const double> t_grid,
                    const EnumerationOptions& options) {
    require_grid(t_grid, "t grid");
    const auto dist = enumerate_pmf(kernel, n, options);
    MgfGrid grid;
    grid.n = n;
    grid.method = MgfMethod::exact;
    grid.truncation_lag = dist.truncation_lag;
    grid.t.assign(t_grid.begin(), t_grid.end());
    grid.values.reserve(t_grid.size());
    for (double t : t_grid) {
        grid.values.push_back(t == 0.0 ? 0.0 : exact_log_mgf(dist, t) / static_cast<double>(n));
    }
    return grid;
}

MgfGrid gamma_from_batch(const PathBatch& batch, std::span<const double> t_grid,
                         std::size_t bootstrap_reps) {
    require_grid(t_grid, "t grid");
    const std::size_t n = batch.horizon;
    std::vector<std::uint64_t> counts(n + 1, 0);
    for (auto h : batch.terminal_counts) {
        ++counts[h];
    }
    const auto total = static_cast<std::uint64_t>(batch.paths);

    MgfGrid grid;
    grid.n = n;
    grid.method = MgfMethod::monte_carlo;
    grid.paths = batch.paths;
    grid.seed = batch.seed;
    grid.t.assign(t_grid.begin(), t_grid.end());
    grid.degenerate = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) == 1;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double t : t_grid) {
        grid.values.push_back(t == 0.0 ? 0.0 : log_mean_exp(counts, total, t) * inv_n);
    }

    grid.std_error.assign(t_grid.size(), 0.0);
    if (grid.degenerate || bootstrap_reps < 2) {
        return grid;
    }
    // Resample paths with replacement through the empirical CDF of H_n.
    std::vector<std::uint64_t> cdf(n + 1);
    std::uint64_t running = 0;
    for (std::size_t r = 0; r <= n; ++r) {
        running += counts[r];
        cdf[r] = running;
    }
    std::vector<std::vector<double>> replicate(t_grid.size(), std::vector<double>(bootstrap_reps));
    std::vector<std::uint64_t> resampled(n + 1);
    for (std::size_t b = 0; b < bootstrap_reps; ++b) {
        std::fill(resampled.begin(), resampled.end(), 0);
        const CounterRng rng(path_seed(batch.seed ^ kBootstrapStream, b));
        for (std::uint64_t i = 0; i < total; ++i) {
            const auto pick = (rng.bits(i) >> 11) % total; // bias < 2^-30 for P < 2^23
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), pick);
            ++resampled[static_cast<std::size_t>(it - cdf.begin())];
        }
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            const double t = t_grid[j];
            replicate[j][b] = t == 0.0 ? 0.0 : log_mean_exp(resampled, total, t) * inv_n;
        }
    }
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        grid.std_error[j] = std::sqrt(sample_moments(replicate[j]).variance);
    }
    return grid;
}

MgfGrid gamma_mc(const ExcitingFunction& kernel, std::size_t n, std::span<const double> t_grid,
                 std::size_t paths, std::uint64_t seed, const MonteCarloOptions& options) {
    require_grid(t_grid, "t grid");
    BatchOptions batch_options;
    batch_options.workers = options.workers;
    batch_options.draw_budget = options.draw_budget;
    const auto batch = simulate_batch(kernel, n, paths, seed, batch_options);
    return gamma_from_batch(batch, t_grid, options.bootstrap_reps);
}

void require_convex(std::span<const double> t, std::span<const double> values,
                    const std::string& what) {
    if (t.size() != values.size()) {
        throw std::invalid_argument(what + ": grid and values differ in length");
    }
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double left = (values[i] - values[i - 1]) / (t[i] - t[i - 1]);
        const double right = (values[i + 1] - values[i]) / (t[i + 1] - t[i]);
        // Slope drop scaled to a second difference on the local spacing.
        if ((right - left) * (t[i + 1] - t[i - 1]) * 0.5 < -kConvexityTolerance) {
            throw std::invalid_argument(what + " is not convex near t = " + std::to_string(t[i]));
        }
    }
}

namespace {

struct GridMax {
    std::size_t index = 0;
    double value = -std::numeric_limits<double>::infinity();
};

GridMax grid_sup(std::span<const double> t, std::span<const double> f, double x) {
    GridMax best;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double v = t[i] * x - f[i];
        if (v > best.value) {
            best = {i, v};
        }
    }
    return best;
}

// Maximise a concave function on [lo, hi].
std::pair<double, double> golden_section_max(const std::function<double(double)>& g, double lo,
                                             double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double gc = g(c);
    double gd = g(d);
    for (int iter = 0; iter < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++iter) {
        if (gc >= gd) {
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
    const double mid = 0.5 * (a + b);
    const double gm = g(mid);
    if (gm >= gc && gm >= gd) {
        return {mid, gm};
    }
    return gc >= gd ? std::pair{c, gc} : std::pair{d, gd};
}

} // namespace

LegendreGrid legendre(const std::function<double(double)>& f, std::span<const double> t_grid,
                      std::span<const double> x_grid, std::string source) {
    require_grid(t_grid, "t grid");
    require_grid(x_grid, "x grid");
    std::vector<double> ft;
    ft.reserve(t_grid.size());
    for (double t : t_grid) {
        ft.push_back(f(t));
    }
    require_convex(t_grid, ft, source);

    LegendreGrid out;
    out.source = std::move(source);
    out.x.assign(x_grid.begin(), x_grid.end());
    for (double x : x_grid) {
        const auto best = grid_sup(t_grid, ft, x);
        double value = best.value;
        double arg = t_grid[best.index];
        const bool at_edge = best.index == 0 || best.index + 1 == t_grid.size();
        if (!at_edge) {
            const auto refined = golden_section_max([&](double t) { return t * x - f(t); },
                                                    t_grid[best.index - 1], t_grid[best.index + 1]);
            if (refined.second > value) {
                arg = refined.first;
                value = refined.second;
            }
        }
        out.values.push_back(value);
        out.argmax_t.push_back(arg);
        out.boundary.push_back(at_edge ? 1 : 0);
    }
    return out;
}

LegendreGrid legendre(const MgfGrid& grid, std::span<const double> x_grid) {
    require_grid(grid.t, "t grid");
    require_grid(x_grid, "x grid");
    require_convex(grid.t, grid.values, "Gamma_n grid");
    double spacing = 0.0;
    for (std::size_t i = 1; i < grid.t.size(); ++i) {
        spacing = std::max(spacing, grid.t[i] - grid.t[i - 1]);
    }
    LegendreGrid out;
    out.source = "gamma_" + std::to_string(grid.n);
    out.x.assign(x_grid.begin(), x_grid.end());
    for (double x : x_grid) {
        const auto best = grid_sup(grid.t, grid.values, x);
        out.values.push_back(best.value);
        out.argmax_t.push_back(grid.t[best.index]);
        out.boundary.push_back(best.index == 0 || best.index + 1 == grid.t.size() ? 1 : 0);
        out.resolution_error.push_back(spacing * std::abs(x));
    }
    return out;
}

double chernoff_tail(const ExcitingFunction& kernel, std::size_t n, double a) {
    require_valid(kernel);
    if (n == 0) {
        throw std::invalid_argument("chernoff_tail: n must be >= 1");
    }
    if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument("chernoff_tail: threshold must lie in (0, 1]");
    }
    // For t >= 0, U is the Bernoulli(S) cumulant generating function, so the
    // infimum is minus its conjugate on [S, 1] and 0 below S.
    const double mass = kernel.total_mass();
    if (a <= mass) {
        return 0.0;
    }
    if (a == 1.0) {
        return std::log(mass);
    }
    return -bernoulli_kl(a, mass);
}

double chernoff_bound(const ExcitingFunction& kernel, std::size_t n, double a) {
    return std::exp(static_cast<double>(n) * chernoff_tail(kernel, n, a));
}

} // namespace dthp

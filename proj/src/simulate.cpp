#include "dthp/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "dthp/moments.hpp"

namespace dthp {

IntensityState::IntensityState(const ExcitingFunction& kernel) : base_rate_(kernel.base_rate()) {
    if (const auto* g = std::get_if<GeometricForm>(&kernel.form())) {
        geometric_ = true;
        alpha_ = g->alpha;
        rho_ = g->rho;
        return;
    }
    weights_ = std::get<ExplicitForm>(kernel.form()).weights;
    ring_.assign(weights_.size(), 0);
}

SamplePath simulate_path(const ExcitingFunction& kernel, std::size_t n, std::uint64_t path_seed) {
    require_valid(kernel);
    SamplePath path;
    path.arrivals.reserve(n);
    path.intensity.reserve(n);
    const CounterRng rng(path_seed);
    IntensityState state(kernel);
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = state.intensity();
        const bool arrival = rng.uniform(k) < lambda;
        path.arrivals.push_back(arrival ? 1 : 0);
        path.intensity.push_back(lambda);
        path.count += arrival ? 1U : 0U;
        state.advance(arrival);
    }
    return path;
}

void check_draw_budget(std::size_t n, std::size_t paths, std::uint64_t budget) {
    if (paths == 0 || n == 0) {
        throw std::invalid_argument("path count and horizon must be >= 1");
    }
    const long double draws = static_cast<long double>(n) * static_cast<long double>(paths);
    if (draws > static_cast<long double>(budget)) {
        throw BudgetExceeded(std::to_string(paths) + " paths x " + std::to_string(n) +
                             " steps exceeds the draw budget of " + std::to_string(budget));
    }
}

namespace {

// Writes per-path results straight into the batch; slots are disjoint per
// path so workers never share an element.
struct BatchWriter {
    PathBatch* batch = nullptr;
    bool full = false;
    std::size_t row = 0;
    std::uint32_t count = 0;

    void begin_path(std::size_t p) {
        row = p;
        count = 0;
    }
    void step(std::size_t k, bool arrival, double lambda) {
        count += arrival ? 1U : 0U;
        if (full) {
            const std::size_t idx = row * batch->horizon + (k - 1);
            batch->arrivals[idx] = arrival ? 1 : 0;
            batch->intensity[idx] = lambda;
        }
    }
    void end_path() { batch->terminal_counts[row] = count; }
    void merge(const BatchWriter& /*other*/) {}
};

} // namespace

PathBatch simulate_batch(const ExcitingFunction& kernel, std::size_t n, std::size_t paths,
                         std::uint64_t seed, const BatchOptions& options) {
    require_valid(kernel);
    check_draw_budget(n, paths, options.draw_budget);
    PathBatch batch;
    batch.kernel_fingerprint = kernel.fingerprint();
    batch.horizon = n;
    batch.paths = paths;
    batch.seed = seed;
    batch.terminal_counts.assign(paths, 0);
    const bool full = options.retention == Retention::full;
    if (full) {
        batch.arrivals.assign(paths * n, 0);
        batch.intensity.assign(paths * n, 0.0);
    }
    for_each_path(kernel, n, paths, seed, options.workers, BatchWriter{&batch, full},
                  options.draw_budget);
    return batch;
}

std::vector<double> clt_statistic(const PathBatch& batch, const ExcitingFunction& kernel) {
    const double mu = limit_arrival_prob(kernel);
    const auto n = static_cast<double>(batch.horizon);
    const double scale = 1.0 / std::sqrt(n);
    std::vector<double> out;
    out.reserve(batch.terminal_counts.size());
    for (std::uint32_t h : batch.terminal_counts) {
        out.push_back((static_cast<double>(h) - n * mu) * scale);
    }
    return out;
}

SampleMoments sample_moments(std::span<const double> values) {
    SampleMoments m;
    if (values.empty()) {
        return m;
    }
    // Welford
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }
    m.mean = mean;
    m.variance = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    return m;
}

std::vector<double> empirical_pmf(const PathBatch& batch) {
    std::vector<std::uint64_t> counts(batch.horizon + 1, 0);
    for (std::uint32_t h : batch.terminal_counts) {
        ++counts[h];
    }
    std::vector<double> pmf;
    pmf.reserve(counts.size());
    for (auto c : counts) {
        pmf.push_back(static_cast<double>(c) / static_cast<double>(batch.paths));
    }
    return pmf;
}

std::vector<double> empirical_marginals(const PathBatch& batch) {
    if (!batch.retains_full()) {
        throw std::invalid_argument("empirical_marginals requires full path retention");
    }
    std::vector<std::uint64_t> counts(batch.horizon, 0);
    for (std::size_t p = 0; p < batch.paths; ++p) {
        for (std::size_t k = 0; k < batch.horizon; ++k) {
            counts[k] += batch.arrivals[p * batch.horizon + k];
        }
    }
    std::vector<double> out;
    out.reserve(counts.size());
    for (auto c : counts) {
        out.push_back(static_cast<double>(c) / static_cast<double>(batch.paths));
    }
    return out;
}

} // namespace dthp

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "dthp/errors.hpp"
#include "dthp/kernel.hpp"
#include "dthp/parallel.hpp"
#include "dthp/rng.hpp"

namespace dthp {

inline constexpr std::uint64_t kDefaultDrawBudget = 1'000'000'000ULL;

/// Running intensity lambda_k = a_0 + sum_{i<k} a_{k-i} xi_i.
///
/// Geometric kernels keep s_k = sum_{i<k} a_{k-i} xi_i with
/// s_{k+1} = rho s_k + alpha xi_k. Explicit kernels keep a ring of the last K
/// arrivals.
class IntensityState {
  public:
    explicit IntensityState(const ExcitingFunction& kernel);

    double intensity() const noexcept {
        return base_rate_ + (geometric_ ? excitation_ : ring_excitation());
    }

    void advance(bool arrival) noexcept {
        if (geometric_) {
            excitation_ = rho_ * excitation_ + (arrival ? alpha_ : 0.0);
            return;
        }
        if (ring_.empty()) {
            return;
        }
        head_ = head_ == 0 ? ring_.size() - 1 : head_ - 1;
        ring_[head_] = arrival ? 1 : 0;
    }

  private:
    double ring_excitation() const noexcept {
        double sum = 0.0;
        const std::size_t k = ring_.size();
        // ring_[head_] is the most recent arrival (lag 1).
        for (std::size_t lag = 0; lag < k; ++lag) {
            std::size_t slot = head_ + lag;
            if (slot >= k) {
                slot -= k;
            }
            if (ring_[slot] != 0) {
                sum += weights_[lag];
            }
        }
        return sum;
    }

    bool geometric_ = false;
    double base_rate_ = 0.0;
    double alpha_ = 0.0;
    double rho_ = 0.0;
    double excitation_ = 0.0;
    std::vector<double> weights_;
    std::vector<std::uint8_t> ring_;
    std::size_t head_ = 0;
};

/// One simulated path of the arrival process.
struct SamplePath {
    std::vector<std::uint8_t> arrivals; // xi_1..xi_n
    std::vector<double> intensity;      // lambda_1..lambda_n
    std::uint32_t count = 0;            // H_n
};

// Step k (0-based) draws u = CounterRng(path_seed).uniform(k) and records an
// arrival iff u < lambda_{k+1}.
SamplePath simulate_path(const ExcitingFunction& kernel, std::size_t n, std::uint64_t path_seed);

enum class Retention { terminal, full };

struct BatchOptions {
    Retention retention = Retention::terminal;
    std::size_t workers = 0;
    std::uint64_t draw_budget = kDefaultDrawBudget;
};

/// Outcome of simulating `paths` independent paths of length `horizon`.
/// Path i uses path_seed(seed, i).
struct PathBatch {
    std::string kernel_fingerprint;
    std::size_t horizon = 0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> terminal_counts;
    // Row-major paths x horizon, present only with Retention::full.
    std::vector<std::uint8_t> arrivals;
    std::vector<double> intensity;

    bool retains_full() const noexcept { return !arrivals.empty(); }
};

PathBatch simulate_batch(const ExcitingFunction& kernel, std::size_t n, std::size_t paths,
                         std::uint64_t seed, const BatchOptions& options = {});

// Throws BudgetExceeded when paths * n exceeds the draw budget.
void check_draw_budget(std::size_t n, std::size_t paths, std::uint64_t budget);

// (H_n - n mu) / sqrt(n) per path, mu the limiting arrival probability.
std::vector<double> clt_statistic(const PathBatch& batch, const ExcitingFunction& kernel);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0; // unbiased
};

// Accumulated in index order, so deterministic for a given input.
SampleMoments sample_moments(std::span<const double> values);

// Empirical P(H_n = r), r = 0..n.
std::vector<double> empirical_pmf(const PathBatch& batch);

// Empirical P(xi_k = 1), k = 1..n. Requires full retention.
std::vector<double> empirical_marginals(const PathBatch& batch);

/// Run `paths` paths and feed every step to a per-worker accumulator.
///
/// Acc provides begin_path(std::size_t path_index), step(std::size_t k,
/// bool arrival, double intensity) with k 1-based, end_path(), and
/// merge(const Acc&). Workers take fixed-size chunks of path indices; the
/// final result is independent of the worker count whenever merge is exact
/// (integer counts, extrema).
template <class Acc>
Acc for_each_path(const ExcitingFunction& kernel, std::size_t n, std::size_t paths,
                  std::uint64_t seed, std::size_t workers, const Acc& seed_acc,
                  std::uint64_t draw_budget = kDefaultDrawBudget) {
    require_valid(kernel);
    check_draw_budget(n, paths, draw_budget);
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (paths + kChunk - 1) / kChunk;
    const std::size_t threads = std::max<std::size_t>(1, std::min(resolve_workers(workers), chunks));
    std::vector<Acc> partial(threads, seed_acc);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&](std::size_t worker) {
        try {
            Acc& acc = partial[worker];
            for (std::size_t chunk = next++; chunk < chunks; chunk = next++) {
                const std::size_t end = std::min(paths, (chunk + 1) * kChunk);
                for (std::size_t p = chunk * kChunk; p < end; ++p) {
                    const CounterRng rng(path_seed(seed, p));
                    IntensityState state(kernel);
                    acc.begin_path(p);
                    for (std::size_t k = 0; k < n; ++k) {
                        const double lambda = state.intensity();
                        const bool arrival = rng.uniform(k) < lambda;
                        acc.step(k + 1, arrival, lambda);
                        state.advance(arrival);
                    }
                    acc.end_path();
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = chunks;
        }
    };

    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back(run, w);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    Acc total = seed_acc;
    for (const auto& p : partial) {
        total.merge(p);
    }
    return total;
}

} // namespace dthp

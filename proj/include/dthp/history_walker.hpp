#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dthp/errors.hpp"
#include "dthp/kernel.hpp"
#include "dthp/parallel.hpp"

namespace dthp {

inline constexpr std::size_t kMaxEnumerationHorizon = 22;
inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << kMaxEnumerationHorizon;

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    void merge(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Depth-first walk over all 2^n binary histories xi_1..xi_n, carrying the
/// chain-rule probability prod_k [lambda_k or 1 - lambda_k].
///
/// Histories are encoded as bit masks with bit (k-1) holding xi_k. The
/// intensity depends on the full arrival pattern, not only on the count, so
/// no states are merged; memory is O(n^2) on the recursion stack.
class HistoryWalker {
  public:
    HistoryWalker(const ExcitingFunction& kernel, std::size_t horizon,
                  std::uint64_t budget = kDefaultEnumerationBudget)
        : horizon_(horizon) {
        require_valid(kernel);
        if (horizon == 0) {
            throw std::invalid_argument("enumeration horizon must be >= 1");
        }
        if (horizon > kMaxEnumerationHorizon || (std::uint64_t{1} << horizon) > budget) {
            throw BudgetExceeded("enumeration of 2^" + std::to_string(horizon) +
                                 " histories exceeds the budget of " + std::to_string(budget) +
                                 " states");
        }
        const auto truncated = truncate_for_enumeration(kernel);
        truncation_lag_ = truncated.truncation_lag;
        fingerprint_ = kernel.fingerprint();
        base_rate_ = kernel.base_rate();
        for (std::size_t lag = 1; lag < kMaxEnumerationHorizon; ++lag) {
            weights_[lag - 1] = truncated.kernel.weight_at(lag);
        }
    }

    std::size_t horizon() const noexcept { return horizon_; }
    std::optional<std::size_t> truncation_lag() const noexcept { return truncation_lag_; }
    const std::string& kernel_fingerprint() const noexcept { return fingerprint_; }

    // Visit every complete history whose first prefix_len steps match prefix.
    // Leaf callback signature: void(std::uint32_t bits, double probability).
    template <class Leaf>
    void walk_subtree(std::uint32_t prefix, std::size_t prefix_len, Leaf& leaf) const {
        Pending pending{};
        double prob = 1.0;
        for (std::size_t step = 0; step < prefix_len; ++step) {
            const double lambda = checked_intensity(pending, step);
            if ((prefix >> step) & 1U) {
                prob *= lambda;
                excite(pending, step);
            } else {
                prob *= 1.0 - lambda;
            }
        }
        descend(prefix_len, prefix, prob, pending, leaf);
    }

    template <class Leaf>
    void walk_all(Leaf& leaf) const {
        walk_subtree(0U, 0, leaf);
    }

  private:
    using Pending = std::array<double, kMaxEnumerationHorizon>;

    double checked_intensity(const Pending& pending, std::size_t step) const {
        const double lambda = base_rate_ + pending[step];
        if (!(lambda > 0.0 && lambda < 1.0)) {
            throw InvariantViolation("intensity left (0,1) during enumeration");
        }
        return lambda;
    }

    // Arrival at `step` raises every later step j by a_{j-step}.
    void excite(Pending& pending, std::size_t step) const noexcept {
        for (std::size_t j = step + 1; j < horizon_; ++j) {
            pending[j] += weights_[j - step - 1];
        }
    }

    template <class Leaf>
    void descend(std::size_t step, std::uint32_t bits, double prob, const Pending& pending,
                 Leaf& leaf) const {
        if (step == horizon_) {
            leaf(bits, prob);
            return;
        }
        const double lambda = checked_intensity(pending, step);
        descend(step + 1, bits, prob * (1.0 - lambda), pending, leaf);
        Pending next = pending;
        excite(next, step);
        descend(step + 1, bits | (1U << step), prob * lambda, next, leaf);
    }

    std::size_t horizon_;
    double base_rate_ = 0.0;
    std::array<double, kMaxEnumerationHorizon> weights_{}; // a_1 .. a_22
    std::optional<std::size_t> truncation_lag_;
    std::string fingerprint_;
};

/// Split the history tree at a fixed prefix depth, walk subtrees on
/// `workers` threads, and merge per-subtree accumulators in prefix order.
/// The merge order is independent of the worker count, so results are
/// bitwise identical for any number of workers.
///
/// Acc must be default-constructible, callable as a leaf, and provide
/// merge(const Acc&).
template <class Acc>
Acc walk_parallel(const HistoryWalker& walker, std::size_t workers, Acc seed_acc = Acc{}) {
    const std::size_t depth = std::min<std::size_t>(walker.horizon(), 8);
    const std::size_t subtrees = std::size_t{1} << depth;
    std::vector<Acc> partial(subtrees, seed_acc);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        try {
            for (std::size_t idx = next++; idx < subtrees; idx = next++) {
                walker.walk_subtree(static_cast<std::uint32_t>(idx), depth, partial[idx]);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = subtrees;
        }
    };
    const std::size_t threads = std::min(resolve_workers(workers), subtrees);
    if (threads <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(run);
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

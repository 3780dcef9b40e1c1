#pragma once

#include <cstddef>
#include <vector>

#include "dthp/kernel.hpp"

namespace dthp {

/// First-moment summary of the arrival process up to a horizon.
struct MomentTable {
    std::size_t horizon = 0;
    std::vector<double> b;        // b_1 .. b_{horizon-1}
    std::vector<double> marginal; // E(xi_1) .. E(xi_horizon)
    double limit_prob = 0.0;
    double clt_variance = 0.0;
    // First n with |marginal - limit_prob| < kLimitReachedTolerance, 0 if
    // not reached within the horizon. Diagnostic only.
    std::size_t limit_reached_at = 0;
};

inline constexpr double kLimitReachedTolerance = 1e-9;

// b_1..b_{horizon-1} from b_n = a_n + sum_{i=1}^{n-1} b_{n-i} a_i, b_1 = a_1.
// Requires horizon >= 2.
std::vector<double> b_recursion(const ExcitingFunction& kernel, std::size_t horizon);

// P(xi_n = 1) = a_0 (1 + b_1 + ... + b_{n-1}). Requires n >= 1.
double marginal_prob(const ExcitingFunction& kernel, std::size_t n);

// P(xi_k = 1) for k = 1..n in one pass.
std::vector<double> marginal_probs(const ExcitingFunction& kernel, std::size_t n);

// mu - P(xi_k = 1) for k = 1..n, computed without cancellation so that the
// gap stays resolvable after P(xi_k = 1) rounds to mu.
std::vector<double> limit_gaps(const ExcitingFunction& kernel, std::size_t n);

// a_0 / (1 - sum_{i>=1} a_i)
double limit_arrival_prob(const ExcitingFunction& kernel);

// Asymptotic variance of (H_n - n mu) / sqrt(n):
// mu (1 - mu) / (1 - sum_{j>=1} a_j)^2.
double clt_variance(const ExcitingFunction& kernel);

MomentTable moment_table(const ExcitingFunction& kernel, std::size_t horizon);

} // namespace dthp

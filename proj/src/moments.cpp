#include "dthp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dthp {

namespace {

// Lag weights a_1..a_{count}, zero beyond finite support.
std::vector<double> lag_weights(const ExcitingFunction& kernel, std::size_t count) {
    std::vector<double> a(count);
    for (std::size_t i = 0; i < count; ++i) {
        a[i] = kernel.weight_at(i + 1);
    }
    return a;
}

} // namespace

std::vector<double> b_recursion(const ExcitingFunction& kernel, std::size_t horizon) {
    if (horizon < 2) {
        throw std::invalid_argument("b_recursion: horizon must be >= 2");
    }
    require_valid(kernel);
    const std::size_t count = horizon - 1;
    const auto a = lag_weights(kernel, count);
    const std::size_t reach = kernel.support().value_or(count);

    // b[m] holds b_{m+1}; a[i] holds a_{i+1}.
    std::vector<double> b(count, 0.0);
    for (std::size_t m = 0; m < count; ++m) {
        double value = a[m];
        const std::size_t last = std::min(m, reach);
        for (std::size_t i = 1; i <= last; ++i) {
            value += b[m - i] * a[i - 1];
        }
        b[m] = value;
    }
    return b;
}

std::vector<double> marginal_probs(const ExcitingFunction& kernel, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("marginal_probs: n must be >= 1");
    }
    require_valid(kernel);
    std::vector<double> out(n);
    out[0] = kernel.base_rate();
    if (n == 1) {
        return out;
    }
    const auto b = b_recursion(kernel, n);
    // E(xi_{k+1}) = E(xi_k) + a_0 b_k
    for (std::size_t k = 1; k < n; ++k) {
        out[k] = out[k - 1] + kernel.base_rate() * b[k - 1];
    }
    return out;
}

double marginal_prob(const ExcitingFunction& kernel, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("marginal_prob: n must be >= 1");
    }
    return marginal_probs(kernel, n).back();
}

// With T_k = sum_{j>=k} b_j and A_m = sum_{i>=m} a_i, the convolution
// identity for b gives T_k (1 - A_1) = A_k + sum_{j<k} b_j A_{k-j}, a sum of
// nonnegative terms; mu - E(xi_k) = a_0 T_k.
std::vector<double> limit_gaps(const ExcitingFunction& kernel, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("limit_gaps: n must be >= 1");
    }
    require_valid(kernel);
    const auto b = n >= 2 ? b_recursion(kernel, n) : std::vector<double>{};
    std::vector<double> tails(n + 1, 0.0);
    for (std::size_t m = 1; m <= n; ++m) {
        tails[m] = kernel.tail_sum(m);
    }
    const double scale = kernel.base_rate() / (1.0 - tails[1]);
    std::vector<double> out(n);
    for (std::size_t k = 1; k <= n; ++k) {
        double sum = tails[k];
        for (std::size_t j = 1; j < k; ++j) {
            sum += b[j - 1] * tails[k - j];
        }
        out[k - 1] = scale * sum;
    }
    return out;
}

double limit_arrival_prob(const ExcitingFunction& kernel) {
    require_valid(kernel);
    return kernel.base_rate() / (1.0 - kernel.excitation_mass());
}

double clt_variance(const ExcitingFunction& kernel) {
    const double mu = limit_arrival_prob(kernel);
    const double gap = 1.0 - kernel.excitation_mass();
    return (mu / gap) * ((1.0 - mu) / gap);
}

MomentTable moment_table(const ExcitingFunction& kernel, std::size_t horizon) {
    if (horizon == 0) {
        throw std::invalid_argument("moment_table: horizon must be >= 1");
    }
    MomentTable table;
    table.horizon = horizon;
    if (horizon >= 2) {
        table.b = b_recursion(kernel, horizon);
    }
    table.marginal = marginal_probs(kernel, horizon);
    table.limit_prob = limit_arrival_prob(kernel);
    table.clt_variance = clt_variance(kernel);
    for (std::size_t k = 0; k < horizon; ++k) {
        if (std::abs(table.marginal[k] - table.limit_prob) < kLimitReachedTolerance) {
            table.limit_reached_at = k + 1;
            break;
        }
    }
    return table;
}

} // namespace dthp

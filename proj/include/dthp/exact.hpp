#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dthp/history_walker.hpp"
#include "dthp/kernel.hpp"

namespace dthp {

struct EnumerationOptions {
    std::size_t workers = 0; // 0: available parallelism
    std::uint64_t budget = kDefaultEnumerationBudget;
};

/// Exact law of H_n, pmf[r] = c_{r,n} = P(H_n = r).
struct ExactDistribution {
    std::size_t horizon = 0;
    std::vector<double> pmf;
    std::string kernel_fingerprint;
    std::optional<std::size_t> truncation_lag;
};

/// Deviations of an ExactDistribution from its closed-form identities.
struct ExactChecks {
    double norm_err = 0.0; // |sum_r c_{r,n} - 1|
    double c0_err = 0.0;   // |c_{0,n} - (1 - a_0)^n|
    double cnn_err = 0.0;  // |c_{n,n} - a_0 (a_0 + a_1) ... (a_0 + ... + a_{n-1})|
};

ExactDistribution enumerate_pmf(const ExcitingFunction& kernel, std::size_t n,
                                const EnumerationOptions& options = {});

// a_0 (a_0 + a_1) ... (a_0 + ... + a_{n-1}) = P(xi_1 = ... = xi_n = 1)
double all_arrivals_probability(const ExcitingFunction& kernel, std::size_t n);

ExactChecks check_identities(const ExcitingFunction& kernel, const ExactDistribution& dist);

// E(e^{t H_n}) = sum_r c_{r,n} e^{r t}.
double exact_mgf(const ExactDistribution& dist, double t);

// log E(e^{t H_n}) in log-sum-exp form; finite for every finite t.
double exact_log_mgf(const ExactDistribution& dist, double t);

// E(H_n) = sum_r r c_{r,n}
double exact_mean(const ExactDistribution& dist);

// P(H_n >= count)
double exact_upper_tail(const ExactDistribution& dist, std::size_t count);

// Smallest integer count with count >= n * fraction, treating values within
// 1e-9 of an integer as that integer.
std::size_t count_threshold(std::size_t n, double fraction);

// P(xi_k = 1) for k = 1..n by enumeration.
std::vector<double> exact_marginals(const ExcitingFunction& kernel, std::size_t n,
                                    const EnumerationOptions& options = {});

// Row-major n x n matrix of Cov[xi_i, xi_j].
std::vector<double> exact_covariance_matrix(const ExcitingFunction& kernel, std::size_t n,
                                            const EnumerationOptions& options = {});

// Cov[xi_i, xi_j] for 1 <= i < j <= n.
double exact_pair_covariance(const ExcitingFunction& kernel, std::size_t i, std::size_t j,
                             std::size_t n, const EnumerationOptions& options = {});

} // namespace dthp

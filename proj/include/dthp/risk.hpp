#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dthp/exact.hpp"
#include "dthp/kernel.hpp"
#include "dthp/simulate.hpp"

namespace dthp {

/// Insurance surplus U_k = u + k p - H_k with unit claims arriving by the
/// discrete-time Hawkes process.
struct SurplusConfig {
    double u = 0.6;              // initial surplus, in (0, 1)
    double p = 0.6;              // premium per step, in (0, 1)
    ExcitingFunction kernel;
    std::size_t horizon = 500;
    std::size_t paths = 100'000;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    std::uint64_t draw_budget = kDefaultDrawBudget;
};

// Throws std::invalid_argument for u or p outside (0, 1), InvalidKernel for a
// bad kernel.
void validate_config(const SurplusConfig& config);

// Ruin is U_k < 0. Surplus values within this distance of 0 count as exactly
// 0 (not ruined), since u + k p carries rounding error.
inline constexpr double kRuinTolerance = 1e-9;

inline double surplus_value(double u, double p, std::size_t k, std::uint64_t claims) noexcept {
    return u + static_cast<double>(k) * p - static_cast<double>(claims);
}

inline bool is_ruined(double surplus) noexcept { return surplus < -kRuinTolerance; }

// U_1..U_n along a claim path.
std::vector<double> surplus_from_arrivals(double u, double p, std::span<const std::uint8_t> arrivals);

// U_1..U_horizon for the claim path simulated from path_seed.
std::vector<double> surplus_path(const SurplusConfig& config, std::uint64_t path_seed);

// Smallest premium that keeps E(U_n)/n positive: a_0 / (1 - sum_{i>=1} a_i).
double premium_threshold(const ExcitingFunction& kernel);

// lim E(U_n)/n = p - premium_threshold
double long_run_drift(const ExcitingFunction& kernel, double p);

/// Bracket of the large-deviation approximation of P(U_n < 0).
///
/// The exponent inf R(x) over x in (u/n + p, 1) is not available in closed
/// form; it lies between the infima of the conjugates of the upper and lower
/// bounds on the limiting scaled log-MGF.
struct LdpRuinBand {
    std::size_t n = 0;
    double threshold_fraction = 0.0; // u/n + p
    bool empty_interval = false;     // u/n + p >= 1: ruin at n impossible
    bool below_premium_threshold = false;
    double inf_upper_conjugate = 0.0; // inf U*
    double inf_lower_conjugate = 0.0; // inf L*
    double prob_lower = 0.0;          // exp(-n inf L*)
    double prob_upper = 0.0;          // exp(-n inf U*)
    double chernoff_upper = 0.0;      // finite-n bound exp(n chernoff_tail)
    std::optional<double> exact;      // P(H_n > u + n p) when enumerable
};

LdpRuinBand ldp_ruin_band(const SurplusConfig& config, std::size_t n,
                          const EnumerationOptions& enumeration = {});

// Smallest claim count that makes U_n < 0.
std::uint64_t ruin_claim_count(double u, double p, std::size_t n);

// P(U_n < 0) = P(H_n > u + n p) by enumeration.
double exact_terminal_ruin_probability(const ExcitingFunction& kernel, std::size_t n, double u,
                                       double p, const EnumerationOptions& options = {});

// P(min_{k <= n} U_k < 0) by enumeration.
double exact_ruin_probability(const ExcitingFunction& kernel, std::size_t n, double u, double p,
                              const EnumerationOptions& options = {});

/// Per-step surplus statistics across a Monte Carlo batch.
struct RuinReport {
    std::size_t horizon = 0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> mean; // E(U_k), k = 1..horizon
    std::vector<double> p5;   // nearest-rank percentiles
    std::vector<double> median;
    std::vector<double> p95;
    std::uint64_t ruin_count = 0;
    double ruin_frequency = 0.0; // P(min_k U_k < 0)
    double ruin_std_error = 0.0;
    double premium_threshold = 0.0;
    double drift = 0.0;          // p - premium_threshold
    double drift_estimate = 0.0; // late-window slope of the mean
    std::optional<LdpRuinBand> ldp_band;
};

// Nearest-rank percentiles are exact because U_k is determined by the
// integer H_k; per-step histograms merge exactly, so the report does not
// depend on the worker count.
RuinReport monte_carlo_fan(const SurplusConfig& config);

// Least-squares slope of values[k] against k over the last
// window_fraction of the steps.
double late_window_slope(std::span<const double> values, double window_fraction = 0.5);

} // namespace dthp

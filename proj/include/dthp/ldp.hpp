#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dthp/exact.hpp"
#include "dthp/kernel.hpp"
#include "dthp/simulate.hpp"

namespace dthp {

enum class MgfMethod { exact, monte_carlo };

/// Gamma_n(t) = (1/n) log E(e^{t H_n}) tabulated on a t grid.
struct MgfGrid {
    std::vector<double> t;
    std::vector<double> values;
    std::size_t n = 0;
    MgfMethod method = MgfMethod::exact;
    // Monte Carlo only.
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> std_error; // bootstrap standard error per grid point
    bool degenerate = false;       // every path landed on one value of H_n
    std::optional<std::size_t> truncation_lag;
};

/// Numerical convex conjugate f*(x) = sup_t { t x - f(t) } over a t grid.
struct LegendreGrid {
    std::vector<double> x;
    std::vector<double> values;
    std::vector<double> argmax_t;
    // Supremum attained at a t-grid endpoint: the value is a lower estimate
    // of the true conjugate.
    std::vector<std::uint8_t> boundary;
    std::string source;
    // Tabulated inputs only: max grid spacing times |x|.
    std::vector<double> resolution_error;
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

// 401 points on [-4, 4].
std::vector<double> default_t_grid();
// 201 points on [0, 1].
std::vector<double> default_x_grid();

// log(1 + (e^t - 1) p): cumulant generating function of Bernoulli(p).
double bernoulli_cgf(double p, double t);

// Bernoulli KL divergence x log(x/p) + (1-x) log((1-x)/(1-p)), the conjugate
// of bernoulli_cgf(p, .) on [0, 1].
double bernoulli_kl(double x, double p);

/// Bounds on the limit of Gamma_n with the kernel constants cached.
struct GammaBounds {
    double base_rate = 0.0;  // a_0
    double limit_prob = 0.0; // mu = a_0 / (1 - sum_{i>=1} a_i)
    double total_mass = 0.0; // sum_{i>=0} a_i

    double lower(double t) const;
    double upper(double t) const;
};

GammaBounds gamma_bounds(const ExcitingFunction& kernel);

// Lower bound on the limit of Gamma_n:
//   t >= 0: log(1 + (e^t - 1) mu)
//   t <  0: max{log(1 + (e^t - 1) mu), log(1 - a_0)}
double bound_L(const ExcitingFunction& kernel, double t);

// Upper bound on the limit of Gamma_n:
//   t >= 0: log(1 + (e^t - 1) sum_{i>=0} a_i)
//   t <  0: log(1 + (e^t - 1) a_0)
double bound_U(const ExcitingFunction& kernel, double t);

MgfGrid gamma_exact(const ExcitingFunction& kernel, std::size_t n, std::span<const double> t_grid,
                    const EnumerationOptions& options = {});

struct MonteCarloOptions {
    std::size_t workers = 0;
    std::size_t bootstrap_reps = 200;
    std::uint64_t draw_budget = kDefaultDrawBudget;
};

MgfGrid gamma_mc(const ExcitingFunction& kernel, std::size_t n, std::span<const double> t_grid,
                 std::size_t paths, std::uint64_t seed, const MonteCarloOptions& options = {});

// Same estimate from an existing batch of terminal counts.
MgfGrid gamma_from_batch(const PathBatch& batch, std::span<const double> t_grid,
                         std::size_t bootstrap_reps = 200);

// Tolerance on discrete second differences when checking convexity.
inline constexpr double kConvexityTolerance = 1e-9;

// Throws std::invalid_argument if slopes between consecutive grid points
// decrease by more than the tolerance.
void require_convex(std::span<const double> t, std::span<const double> values,
                    const std::string& what);

// Conjugate of an analytic convex function: grid supremum, then
// golden-section refinement on the bracketing interval for interior maxima.
LegendreGrid legendre(const std::function<double(double)>& f, std::span<const double> t_grid,
                      std::span<const double> x_grid, std::string source);

// Conjugate of a tabulated grid (grid supremum only).
LegendreGrid legendre(const MgfGrid& grid, std::span<const double> x_grid);

// inf_{t >= 0} (U(t) - t a), so that P(H_n / n >= a) <= exp(n * result).
// Always <= 0; equals 0 for a <= sum_{i>=0} a_i. Requires 0 < a <= 1.
double chernoff_tail(const ExcitingFunction& kernel, std::size_t n, double a);

// exp(n * chernoff_tail(kernel, n, a))
double chernoff_bound(const ExcitingFunction& kernel, std::size_t n, double a);

} // namespace dthp

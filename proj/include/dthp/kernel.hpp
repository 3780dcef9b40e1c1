#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dthp {

/// a_i = alpha * rho^(i-1) for i >= 1.
struct GeometricForm {
    double alpha = 0.0;
    double rho = 0.0;
};

/// a_1..a_K listed explicitly, a_i = 0 for i > K.
struct ExplicitForm {
    std::vector<double> weights;
};

/// Exciting function of a discrete-time Hawkes process: a base arrival
/// probability a_0 plus lag weights a_1, a_2, ... .
///
/// The intensity at step n is a_0 + sum_{i<n} a_{n-i} xi_i. Construction
/// never fails; call validate() or require_valid() before use.
class ExcitingFunction {
  public:
    using Form = std::variant<GeometricForm, ExplicitForm>;

    ExcitingFunction() = default;

    static ExcitingFunction geometric(double base_rate, double alpha, double rho);
    static ExcitingFunction explicit_weights(double base_rate, std::vector<double> weights);

    double base_rate() const noexcept { return base_rate_; }
    const Form& form() const noexcept { return form_; }
    bool is_geometric() const noexcept { return std::holds_alternative<GeometricForm>(form_); }

    // Largest lag with nonzero weight; nullopt for infinite (geometric) support.
    std::optional<std::size_t> support() const;

    // a_lag for lag >= 1. Throws std::invalid_argument for lag == 0.
    double weight_at(std::size_t lag) const;

    // sum_{i >= from_lag} a_i; from_lag == 0 is treated as 1.
    double tail_sum(std::size_t from_lag) const;

    // sum_{i >= 1} a_i
    double excitation_mass() const { return tail_sum(1); }

    // a_0 + sum_{i >= 1} a_i
    double total_mass() const { return base_rate_ + excitation_mass(); }

    // sum_{i >= 1} i * a_i
    double first_moment() const;

    // Stable identifier derived from the canonical JSON text.
    std::string fingerprint() const;

    friend bool operator==(const ExcitingFunction& lhs, const ExcitingFunction& rhs);

  private:
    double base_rate_ = 0.0;
    Form form_ = ExplicitForm{};
};

bool operator==(const GeometricForm& lhs, const GeometricForm& rhs);
bool operator==(const ExplicitForm& lhs, const ExplicitForm& rhs);

// Total mass must not exceed 1 - kMassMargin so that intensities stay
// representable strictly below 1.
inline constexpr double kMassMargin = 1e-9;

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    bool passed = false;
    double excitation_mass = 0.0;
    double total_mass = 0.0;
    double first_moment = 0.0;
    std::vector<ValidationCheck> checks;

    // Message listing the failed checks, empty when passed.
    std::string failure_summary() const;
};

ValidationReport validate(const ExcitingFunction& kernel);

// Throws InvalidKernel carrying the failure summary.
void require_valid(const ExcitingFunction& kernel);

/// A finite-support copy of a kernel for exhaustive enumeration.
struct TruncatedKernel {
    ExcitingFunction kernel;
    // Lag K after which geometric weights were dropped; nullopt when the
    // source was already finite.
    std::optional<std::size_t> truncation_lag;
    double dropped_mass = 0.0;
};

inline constexpr double kTruncationTolerance = 1e-12;

// Geometric kernels are cut at the smallest K with tail_sum(K+1) <= tolerance.
TruncatedKernel truncate_for_enumeration(const ExcitingFunction& kernel,
                                         double tolerance = kTruncationTolerance);

// {"a0": 0.2, "form": "geometric", "alpha": 0.3, "rho": 0.5}
// {"a0": 0.2, "form": "explicit", "weights": [0.3, 0.15]}
// Throws std::invalid_argument on malformed input (validation is separate).
ExcitingFunction kernel_from_json(const nlohmann::json& spec);
nlohmann::json kernel_to_json(const ExcitingFunction& kernel);

} // namespace dthp

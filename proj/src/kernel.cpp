#include "dthp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "dthp/errors.hpp"
#include "dthp/format.hpp"

namespace dthp {

ExcitingFunction ExcitingFunction::geometric(double base_rate, double alpha, double rho) {
    ExcitingFunction k;
    k.base_rate_ = base_rate;
    k.form_ = GeometricForm{alpha, rho};
    return k;
}

ExcitingFunction ExcitingFunction::explicit_weights(double base_rate, std::vector<double> weights) {
    ExcitingFunction k;
    k.base_rate_ = base_rate;
    k.form_ = ExplicitForm{std::move(weights)};
    return k;
}

std::optional<std::size_t> ExcitingFunction::support() const {
    if (const auto* e = std::get_if<ExplicitForm>(&form_)) {
        return e->weights.size();
    }
    return std::nullopt;
}

double ExcitingFunction::weight_at(std::size_t lag) const {
    if (lag == 0) {
        throw std::invalid_argument("weight_at: lag must be >= 1 (a_0 is the base rate)");
    }
    if (const auto* g = std::get_if<GeometricForm>(&form_)) {
        return g->alpha * std::pow(g->rho, static_cast<double>(lag - 1));
    }
    const auto& w = std::get<ExplicitForm>(form_).weights;
    return lag <= w.size() ? w[lag - 1] : 0.0;
}

double ExcitingFunction::tail_sum(std::size_t from_lag) const {
    from_lag = std::max<std::size_t>(from_lag, 1);
    if (const auto* g = std::get_if<GeometricForm>(&form_)) {
        return g->alpha * std::pow(g->rho, static_cast<double>(from_lag - 1)) / (1.0 - g->rho);
    }
    const auto& w = std::get<ExplicitForm>(form_).weights;
    double sum = 0.0;
    // Smallest terms first.
    for (std::size_t lag = w.size(); lag >= from_lag; --lag) {
        sum += w[lag - 1];
    }
    return sum;
}

double ExcitingFunction::first_moment() const {
    if (const auto* g = std::get_if<GeometricForm>(&form_)) {
        return g->alpha / ((1.0 - g->rho) * (1.0 - g->rho));
    }
    const auto& w = std::get<ExplicitForm>(form_).weights;
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += static_cast<double>(i + 1) * w[i];
    }
    return sum;
}

std::string ExcitingFunction::fingerprint() const {
    const std::string text = kernel_to_json(*this).dump();
    // FNV-1a
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << (is_geometric() ? "geo-" : "exp-") << std::hex << std::setw(16) << std::setfill('0')
       << hash;
    return os.str();
}

bool operator==(const GeometricForm& lhs, const GeometricForm& rhs) {
    return lhs.alpha == rhs.alpha && lhs.rho == rhs.rho;
}

bool operator==(const ExplicitForm& lhs, const ExplicitForm& rhs) {
    return lhs.weights == rhs.weights;
}

bool operator==(const ExcitingFunction& lhs, const ExcitingFunction& rhs) {
    return lhs.base_rate_ == rhs.base_rate_ && lhs.form_ == rhs.form_;
}

std::string ValidationReport::failure_summary() const {
    std::string out;
    for (const auto& c : checks) {
        if (!c.passed) {
            if (!out.empty()) {
                out += "; ";
            }
            out += c.name + ": " + c.detail;
        }
    }
    return out;
}

ValidationReport validate(const ExcitingFunction& kernel) {
    ValidationReport report;
    auto add = [&](std::string name, bool ok, std::string detail) {
        report.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    const double a0 = kernel.base_rate();
    bool finite = std::isfinite(a0);
    if (const auto* g = std::get_if<GeometricForm>(&kernel.form())) {
        finite = finite && std::isfinite(g->alpha) && std::isfinite(g->rho);
    } else {
        for (double w : std::get<ExplicitForm>(kernel.form()).weights) {
            finite = finite && std::isfinite(w);
        }
    }
    add("finite_parameters", finite, finite ? "ok" : "non-finite parameter");
    if (!finite) {
        report.passed = false;
        return report;
    }

    add("base_rate", a0 > 0.0 && a0 < 1.0, "a0 = " + format_double(a0) + ", need 0 < a0 < 1");

    if (const auto* g = std::get_if<GeometricForm>(&kernel.form())) {
        add("rho_range", g->rho > 0.0 && g->rho < 1.0,
            "rho = " + format_double(g->rho) + ", need 0 < rho < 1");
        add("positive_weights", g->alpha > 0.0,
            "alpha = " + format_double(g->alpha) + ", need alpha > 0");
    } else {
        const auto& w = std::get<ExplicitForm>(kernel.form()).weights;
        std::size_t bad = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!(w[i] > 0.0)) {
                bad = i + 1;
                break;
            }
        }
        add("positive_weights", bad == 0,
            bad == 0 ? "ok" : "a_" + std::to_string(bad) + " is not positive");
    }

    // Sums are only meaningful once the geometric ratio is in range.
    const bool rho_ok = std::all_of(report.checks.begin(), report.checks.end(),
                                    [](const ValidationCheck& c) { return c.name != "rho_range" || c.passed; });
    if (rho_ok) {
        report.excitation_mass = kernel.excitation_mass();
        report.total_mass = kernel.total_mass();
        report.first_moment = kernel.first_moment();
        add("total_mass", report.total_mass <= 1.0 - kMassMargin,
            "total mass = " + format_double(report.total_mass) + ", need < 1");
        add("first_moment", std::isfinite(report.first_moment),
            "sum i*a_i = " + format_double(report.first_moment));
    }

    report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const ValidationCheck& c) { return c.passed; });
    return report;
}

void require_valid(const ExcitingFunction& kernel) {
    const auto report = validate(kernel);
    if (!report.passed) {
        throw InvalidKernel("invalid exciting function: " + report.failure_summary());
    }
}

TruncatedKernel truncate_for_enumeration(const ExcitingFunction& kernel, double tolerance) {
    const auto* g = std::get_if<GeometricForm>(&kernel.form());
    if (g == nullptr) {
        return {kernel, std::nullopt, 0.0};
    }
    std::size_t lag = 0;
    while (kernel.tail_sum(lag + 2) > tolerance) {
        ++lag;
    }
    const std::size_t k = lag + 1;
    std::vector<double> weights;
    weights.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
        weights.push_back(kernel.weight_at(i));
    }
    return {ExcitingFunction::explicit_weights(kernel.base_rate(), std::move(weights)), k,
            kernel.tail_sum(k + 1)};
}

namespace {

double require_number(const nlohmann::json& spec, const char* key) {
    if (!spec.contains(key) || !spec.at(key).is_number()) {
        throw std::invalid_argument(std::string("kernel spec: missing numeric field '") + key + "'");
    }
    return spec.at(key).get<double>();
}

} // namespace

ExcitingFunction kernel_from_json(const nlohmann::json& spec) {
    if (!spec.is_object()) {
        throw std::invalid_argument("kernel spec must be a JSON object");
    }
    const double a0 = require_number(spec, "a0");
    if (!spec.contains("form") || !spec.at("form").is_string()) {
        throw std::invalid_argument("kernel spec: missing string field 'form'");
    }
    const auto form = spec.at("form").get<std::string>();
    if (form == "geometric") {
        return ExcitingFunction::geometric(a0, require_number(spec, "alpha"),
                                           require_number(spec, "rho"));
    }
    if (form == "explicit") {
        if (!spec.contains("weights") || !spec.at("weights").is_array()) {
            throw std::invalid_argument("kernel spec: explicit form needs a 'weights' array");
        }
        std::vector<double> weights;
        for (const auto& w : spec.at("weights")) {
            if (!w.is_number()) {
                throw std::invalid_argument("kernel spec: weights must be numbers");
            }
            weights.push_back(w.get<double>());
        }
        return ExcitingFunction::explicit_weights(a0, std::move(weights));
    }
    throw std::invalid_argument("kernel spec: unknown form '" + form + "'");
}

nlohmann::json kernel_to_json(const ExcitingFunction& kernel) {
    nlohmann::json out;
    out["a0"] = kernel.base_rate();
    if (const auto* g = std::get_if<GeometricForm>(&kernel.form())) {
        out["form"] = "geometric";
        out["alpha"] = g->alpha;
        out["rho"] = g->rho;
    } else {
        out["form"] = "explicit";
        out["weights"] = std::get<ExplicitForm>(kernel.form()).weights;
    }
    return out;
}

} // namespace dthp

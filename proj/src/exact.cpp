#include "dthp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dthp {

namespace {

struct PmfAccumulator {
    std::vector<CompensatedSum> bins;

    void operator()(std::uint32_t bits, double prob) {
        bins[static_cast<std::size_t>(std::popcount(bits))].add(prob);
    }
    void merge(const PmfAccumulator& other) {
        for (std::size_t r = 0; r < bins.size(); ++r) {
            bins[r].merge(other.bins[r]);
        }
    }
};

// First and second moments of the xi vector.
struct MomentAccumulator {
    std::size_t n = 0;
    std::vector<CompensatedSum> first;  // E(xi_i)
    std::vector<CompensatedSum> second; // E(xi_i xi_j), row-major

    void operator()(std::uint32_t bits, double prob) {
        for (std::size_t i = 0; i < n; ++i) {
            if (((bits >> i) & 1U) == 0) {
                continue;
            }
            first[i].add(prob);
            for (std::size_t j = i; j < n; ++j) {
                if ((bits >> j) & 1U) {
                    second[i * n + j].add(prob);
                }
            }
        }
    }
    void merge(const MomentAccumulator& other) {
        for (std::size_t i = 0; i < first.size(); ++i) {
            first[i].merge(other.first[i]);
        }
        for (std::size_t i = 0; i < second.size(); ++i) {
            second[i].merge(other.second[i]);
        }
    }
};

MomentAccumulator enumerate_moments(const ExcitingFunction& kernel, std::size_t n,
                                    const EnumerationOptions& options) {
    const HistoryWalker walker(kernel, n, options.budget);
    MomentAccumulator seed{n, std::vector<CompensatedSum>(n), std::vector<CompensatedSum>(n * n)};
    return walk_parallel(walker, options.workers, seed);
}

} // namespace

ExactDistribution enumerate_pmf(const ExcitingFunction& kernel, std::size_t n,
                                const EnumerationOptions& options) {
    const HistoryWalker walker(kernel, n, options.budget);
    const auto acc = walk_parallel(walker, options.workers,
                                   PmfAccumulator{std::vector<CompensatedSum>(n + 1)});
    ExactDistribution dist;
    dist.horizon = n;
    dist.kernel_fingerprint = walker.kernel_fingerprint();
    dist.truncation_lag = walker.truncation_lag();
    dist.pmf.reserve(n + 1);
    for (const auto& bin : acc.bins) {
        dist.pmf.push_back(bin.value());
    }
    return dist;
}

double all_arrivals_probability(const ExcitingFunction& kernel, std::size_t n) {
    double prob = 1.0;
    double level = kernel.base_rate();
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            level += kernel.weight_at(k);
        }
        prob *= level;
    }
    return prob;
}

ExactChecks check_identities(const ExcitingFunction& kernel, const ExactDistribution& dist) {
    CompensatedSum total;
    for (double c : dist.pmf) {
        total.add(c);
    }
    const auto n = static_cast<double>(dist.horizon);
    ExactChecks checks;
    checks.norm_err = std::abs(total.value() - 1.0);
    checks.c0_err = std::abs(dist.pmf.front() - std::pow(1.0 - kernel.base_rate(), n));
    checks.cnn_err = std::abs(dist.pmf.back() - all_arrivals_probability(kernel, dist.horizon));
    return checks;
}

double exact_log_mgf(const ExactDistribution& dist, double t) {
    // r = 0 contributes log c_0 without a t term, so t = -inf is well defined.
    auto term = [&](std::size_t r) {
        return r == 0 ? std::log(dist.pmf[0]) : std::log(dist.pmf[r]) + t * static_cast<double>(r);
    };
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < dist.pmf.size(); ++r) {
        if (dist.pmf[r] > 0.0) {
            peak = std::max(peak, term(r));
        }
    }
    if (!std::isfinite(peak)) {
        return peak;
    }
    double sum = 0.0;
    for (std::size_t r = 0; r < dist.pmf.size(); ++r) {
        if (dist.pmf[r] > 0.0) {
            sum += std::exp(term(r) - peak);
        }
    }
    return peak + std::log(sum);
}

double exact_mgf(const ExactDistribution& dist, double t) {
    if (!(std::abs(t) * static_cast<double>(dist.horizon) <= 700.0)) {
        return std::exp(exact_log_mgf(dist, t));
    }
    const double base = std::exp(t);
    double power = 1.0;
    double sum = 0.0;
    for (double c : dist.pmf) {
        sum += c * power;
        power *= base;
    }
    return sum;
}

double exact_mean(const ExactDistribution& dist) {
    CompensatedSum mean;
    for (std::size_t r = 1; r < dist.pmf.size(); ++r) {
        mean.add(static_cast<double>(r) * dist.pmf[r]);
    }
    return mean.value();
}

double exact_upper_tail(const ExactDistribution& dist, std::size_t count) {
    CompensatedSum tail;
    for (std::size_t r = dist.pmf.size(); r-- > count;) {
        tail.add(dist.pmf[r]);
    }
    return tail.value();
}

std::size_t count_threshold(std::size_t n, double fraction) {
    const double target = static_cast<double>(n) * fraction;
    const double nearest = std::round(target);
    if (std::abs(target - nearest) <= 1e-9) {
        return static_cast<std::size_t>(std::max(0.0, nearest));
    }
    return static_cast<std::size_t>(std::max(0.0, std::ceil(target)));
}

std::vector<double> exact_marginals(const ExcitingFunction& kernel, std::size_t n,
                                    const EnumerationOptions& options) {
    const auto acc = enumerate_moments(kernel, n, options);
    std::vector<double> out;
    out.reserve(n);
    for (const auto& s : acc.first) {
        out.push_back(s.value());
    }
    return out;
}

std::vector<double> exact_covariance_matrix(const ExcitingFunction& kernel, std::size_t n,
                                            const EnumerationOptions& options) {
    const auto acc = enumerate_moments(kernel, n, options);
    std::vector<double> cov(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double value =
                acc.second[i * n + j].value() - acc.first[i].value() * acc.first[j].value();
            cov[i * n + j] = value;
            cov[j * n + i] = value;
        }
    }
    return cov;
}

double exact_pair_covariance(const ExcitingFunction& kernel, std::size_t i, std::size_t j,
                             std::size_t n, const EnumerationOptions& options) {
    if (!(1 <= i && i < j && j <= n)) {
        throw std::invalid_argument("exact_pair_covariance: need 1 <= i < j <= n");
    }
    const auto cov = exact_covariance_matrix(kernel, n, options);
    return cov[(i - 1) * n + (j - 1)];
}

} // namespace dthp

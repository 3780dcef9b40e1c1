#include <doctest.h>

#include <cmath>

#include "dthp/kernel.hpp"
#include "dthp/moments.hpp"
#include "oracle.hpp"

using dthp::ExcitingFunction;

namespace {
const ExcitingFunction reference = ExcitingFunction::geometric(0.2, 0.3, 0.5);
}

TEST_CASE("b recursion values") {
    const auto b3 = dthp::b_recursion(reference, 3);
    REQUIRE(b3.size() == 2);
    CHECK(b3[0] == 0.3);
    CHECK(std::abs(b3[1] - 0.24) <= 1e-16);
    const auto b2 = dthp::b_recursion(reference, 2);
    REQUIRE(b2.size() == 1);
    CHECK(b2[0] == 0.3);
    const double eps = 1e-6;
    CHECK(dthp::b_recursion(ExcitingFunction::explicit_weights(0.4, {eps}), 2)[0] == eps);
    CHECK_THROWS_AS(dthp::b_recursion(reference, 1), std::invalid_argument);
}

TEST_CASE("marginal probabilities") {
    CHECK(dthp::marginal_prob(reference, 1) == 0.2);
    CHECK(dthp::marginal_prob(reference, 2) == doctest::Approx(0.26).epsilon(1e-15));
    CHECK(std::abs(dthp::marginal_prob(reference, 3) - 0.308) <= 1e-15);
    CHECK(dthp::marginal_prob(ExcitingFunction::explicit_weights(0.37, {0.1, 0.2}), 1) == 0.37);
    CHECK_THROWS_AS(dthp::marginal_prob(reference, 0), std::invalid_argument);
}

TEST_CASE("marginals match the enumeration oracle") {
    const struct {
        ExcitingFunction kernel;
        oracle::Model model;
    } cases[] = {
        {reference, oracle::geometric(0.2, 0.3, 0.5)},
        {ExcitingFunction::explicit_weights(0.1, {0.25, 0.05, 0.3, 0.1}),
         oracle::explicit_weights(0.1, {0.25, 0.05, 0.3, 0.1})},
        {ExcitingFunction::geometric(0.35, 0.5, 0.2), oracle::geometric(0.35, 0.5, 0.2)},
    };
    for (const auto& c : cases) {
        const auto oracle_marginals = oracle::marginals(c.model, 14);
        const auto marginals = dthp::marginal_probs(c.kernel, 14);
        for (std::size_t k = 0; k < 14; ++k) {
            CHECK(std::abs(marginals[k] - oracle_marginals[k]) <= 1e-12);
            CHECK(std::abs(dthp::marginal_prob(c.kernel, k + 1) - oracle_marginals[k]) <= 1e-12);
        }
    }
}

TEST_CASE("limit gaps agree with marginals") {
    const ExcitingFunction kernels[] = {reference, ExcitingFunction::explicit_weights(0.1, {0.2, 0.3, 0.1}),
                                        ExcitingFunction::explicit_weights(0.3, {})};
    for (const auto& k : kernels) {
        const auto m = dthp::marginal_probs(k, 60);
        const auto g = dthp::limit_gaps(k, 60);
        const double mu = dthp::limit_arrival_prob(k);
        for (std::size_t n = 0; n < m.size(); ++n) {
            CHECK(std::abs(mu - m[n] - g[n]) <= 1e-15);
        }
    }
    // 0.5 - E(xi_1) = 0.3 and 0.5 - E(xi_3) = 0.192
    const auto g = dthp::limit_gaps(reference, 3);
    CHECK(g[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(g[2] == doctest::Approx(0.192).epsilon(1e-14));
    // Geometric decay at rate a_1 + rho = 0.8 in the far tail.
    const auto far = dthp::limit_gaps(reference, 300);
    CHECK(far[299] / far[298] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("limit and CLT variance") {
    CHECK(dthp::limit_arrival_prob(reference) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dthp::limit_arrival_prob(ExcitingFunction::explicit_weights(0.2, {})) == 0.2);
    CHECK(dthp::limit_arrival_prob(ExcitingFunction::explicit_weights(0.1, {0.5})) ==
          doctest::Approx(0.2).epsilon(1e-15));
    CHECK(dthp::clt_variance(reference) == doctest::Approx(1.5625).epsilon(1e-14));
    CHECK(dthp::clt_variance(ExcitingFunction::explicit_weights(0.5, {})) == 0.25);
    CHECK(dthp::clt_variance(ExcitingFunction::explicit_weights(0.1, {0.5})) ==
          doctest::Approx(0.64).epsilon(1e-14));
}

TEST_CASE("monotone convergence to the limit") {
    const ExcitingFunction kernels[] = {reference, ExcitingFunction::explicit_weights(0.1, {0.2, 0.3, 0.1}),
                                        ExcitingFunction::geometric(0.05, 0.9, 0.05)};
    for (const auto& k : kernels) {
        const auto m = dthp::marginal_probs(k, 201);
        const double mu = dthp::limit_arrival_prob(k);
        for (std::size_t n = 1; n < m.size(); ++n) {
            // Strict until the recursion saturates at the limit in double precision.
            if (mu - m[n - 1] > 1e-15) {
                CHECK(m[n] > m[n - 1]);
            } else {
                CHECK(m[n] >= m[n - 1]);
            }
            CHECK(std::abs(m[n] - mu) <= std::abs(m[n - 1] - mu));
        }
    }
    // Doubles near 0.5 stop resolving the increments after n ~ 160; the gaps
    // carry the strict ordering.
    const auto pm = dthp::marginal_probs(reference, 201);
    const auto gaps = dthp::limit_gaps(reference, 201);
    for (std::size_t n = 1; n < pm.size(); ++n) {
        CHECK(pm[n] >= pm[n - 1]);
        CHECK(gaps[n] > 0.0);
        CHECK(gaps[n] < gaps[n - 1]);
    }
    CHECK(std::abs(dthp::marginal_prob(reference, 200) - 0.5) < 1e-3);
}

TEST_CASE("over-dispersion relative to i.i.d.") {
    const ExcitingFunction kernels[] = {reference, ExcitingFunction::explicit_weights(0.1, {0.01}),
                                        ExcitingFunction::geometric(0.6, 0.01, 0.9)};
    for (const auto& k : kernels) {
        const double mu = dthp::limit_arrival_prob(k);
        CHECK(dthp::clt_variance(k) > mu * (1.0 - mu));
    }
}

TEST_CASE("moment table") {
    const auto t = dthp::moment_table(reference, 300);
    CHECK(t.horizon == 300);
    CHECK(t.b.size() == 299);
    CHECK(t.marginal.size() == 300);
    CHECK(t.limit_prob == doctest::Approx(0.5));
    CHECK(t.limit_reached_at > 0);
    CHECK(std::abs(t.marginal[t.limit_reached_at - 1] - 0.5) < dthp::kLimitReachedTolerance);
    CHECK(std::abs(t.marginal[t.limit_reached_at - 2] - 0.5) >= dthp::kLimitReachedTolerance);
    CHECK(dthp::moment_table(reference, 5).limit_reached_at == 0);
}

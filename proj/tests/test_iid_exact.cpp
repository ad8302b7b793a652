#include "concentrate/error.hpp"
#include "concentrate/finite.hpp"
#include "concentrate/iid_exact.hpp"
#include "concentrate/log_space.hpp"
#include "concentrate/random.hpp"
#include "concentrate/rate_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace concentrate;

namespace {
const auto p = new_spectrum(std::vector<double>{0.75, 0.25});

double normalization(const GroupedSpectrum &g) {
    std::vector<double> terms;
    for (const auto &x : g.groups) terms.push_back(x.log_prob + x.log_multiplicity);
    return logspace::sum_exp(terms);
}
} // namespace

TEST_CASE("grouped spectrum") {
    const auto u = grouped_spectrum(SchmidtSpectrum::uniform(2), 3);
    REQUIRE(u.groups.size() == 1);
    CHECK(u.groups[0].log_prob == doctest::Approx(-3.0));
    CHECK(u.groups[0].log_multiplicity == doctest::Approx(3.0));

    const auto g = grouped_spectrum(p, 2);
    REQUIRE(g.groups.size() == 3);
    CHECK(g.groups[0].log_prob == doctest::Approx(-0.8300749985576876371).epsilon(1e-14));
    CHECK(g.groups[0].log_multiplicity == doctest::Approx(0.0));
    CHECK(g.groups[1].log_prob == doctest::Approx(std::log2(0.1875)).epsilon(1e-14));
    CHECK(g.groups[1].log_multiplicity == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.groups[2].log_prob == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(g.total_log_dim == doctest::Approx(2.0));

    Rng rng(4);
    for (int k = 0; k < 10; ++k) {
        const auto q = random_spectrum(rng, rng.integer(2, 5));
        const auto h = grouped_spectrum(q, static_cast<std::uint32_t>(rng.integer(1, 30)));
        CHECK(std::abs(normalization(h)) <= 1e-9);
        for (std::size_t i = 1; i < h.groups.size(); ++i) CHECK(h.groups[i].log_prob < h.groups[i - 1].log_prob);
    }
}

TEST_CASE("equal coefficients merge into one class") {
    const auto q = new_spectrum(std::vector<double>{0.4, 0.3, 0.3});
    const auto g = grouped_spectrum(q, 20);
    CHECK(g.groups.size() == 21);
    CHECK(std::abs(normalization(g)) <= 1e-9);
    // Large n stays in the O(n) two-class path.
    const auto big = grouped_spectrum(q, 5000);
    CHECK(big.groups.size() == 5001);
    CHECK(std::abs(normalization(big)) <= 1e-9);
}

TEST_CASE("exact success probability") {
    const auto two = exact_success_prob(p, 2, 1.0);
    CHECK(std::exp2(two.log2_success) == doctest::Approx(0.875).epsilon(1e-14));
    CHECK(std::exp2(two.log2_failure) == doctest::Approx(0.125).epsilon(1e-13));

    const auto one = exact_success_prob(p, 5, 0.0);
    CHECK(std::abs(one.log2_success) <= 1e-15);
    CHECK(one.log2_failure == logspace::neg_inf);

    CHECK_THROWS_AS(exact_success_prob(p, 2, 2.5), Error);
    CHECK_THROWS_AS(exact_success_prob(p, 2, -1.0), Error);
}

TEST_CASE("single copy reproduces the finite protocol") {
    Rng rng(8);
    for (int k = 0; k < 50; ++k) {
        const auto q = random_spectrum(rng, rng.integer(1, 10));
        for (std::size_t L = 1; L <= q.dim(); ++L) {
            const auto ex = exact_success_prob(q, 1, std::log2(static_cast<double>(L)));
            CHECK(std::abs(std::exp2(ex.log2_success) - optimal_probability(q, L)) <= 1e-12);
        }
    }
}

TEST_CASE("monotone in L and P = t L") {
    const auto g = grouped_spectrum(new_spectrum(std::vector<double>{0.5, 0.3, 0.2}), 7);
    double prev  = 0.0;
    for (std::size_t L = 1; L <= 2187; ++L) {
        const auto ex = exact_success_prob(g, std::log2(static_cast<double>(L)));
        CHECK(ex.log2_success <= prev + 1e-12);
        if (ex.log2_success < 0.0)
            CHECK(ex.log2_success == doctest::Approx(ex.log2_threshold + ex.log2_size).epsilon(1e-12));
        prev = ex.log2_success;
    }
}

TEST_CASE("log-space survives large n") {
    const auto ex = exact_success_prob(p, 2000, target_log_size(0.6, 2000, 2));
    CHECK(std::isfinite(ex.log2_failure));
    CHECK(ex.log2_failure < -100.0);
    CHECK(ex.log2_success <= 0.0);
    CHECK(ex.log2_success > -1e-9);
}

TEST_CASE("target sizes") {
    CHECK(target_log_size(0.5, 4, 2) == doctest::Approx(2.0));
    CHECK(target_log_size(0.6, 10, 2) == doctest::Approx(6.0));
    CHECK(target_log_size(0.61, 10, 2) == doctest::Approx(std::log2(69.0)));
    CHECK(target_log_size(2.0, 10, 2) == doctest::Approx(10.0));
    CHECK(target_log_size(0.6, 1000, 2) == doctest::Approx(600.0));
}

TEST_CASE("exponent sweep regimes") {
    CHECK_THROWS_AS(exponent_sweep(p, shannon_entropy(p), std::vector<std::uint32_t>{10}, Regime::Direct), Error);
    CHECK_THROWS_AS(exponent_sweep(p, 0.3, std::vector<std::uint32_t>{10}, Regime::Direct), Error);
    CHECK_THROWS_AS(exponent_sweep(p, 0.6, std::vector<std::uint32_t>{10}, Regime::Converse), Error);
    try {
        exponent_sweep(p, shannon_entropy(p), std::vector<std::uint32_t>{10}, Regime::Converse);
        FAIL("expected RateOutOfRange");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::RateOutOfRange);
    }

    const std::vector<std::uint32_t> n = {200};
    const auto direct = exponent_sweep(p, 0.6, n, Regime::Direct).front();
    REQUIRE(direct.failure_exponent.has_value());
    const double target = inverse_direct(p, 0.6);
    CHECK(*direct.failure_exponent >= target - 2.0 * std::log2(201.0) / 200.0);
    CHECK(std::abs(*direct.failure_exponent - target) <= 2.0 * std::log2(201.0) / 200.0);

    const auto conv = exponent_sweep(p, 0.95, n, Regime::Converse).front();
    REQUIRE(conv.success_exponent.has_value());
    CHECK(std::abs(*conv.success_exponent - inverse_converse(p, 0.95)) <= 2.0 * std::log2(201.0) / 200.0);
    CHECK(conv.rate_R == doctest::Approx(0.95));
}

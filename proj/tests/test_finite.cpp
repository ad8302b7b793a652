#include "concentrate/error.hpp"
#include "concentrate/finite.hpp"
#include "concentrate/random.hpp"

#include <doctest.h>

#include <vector>

using namespace concentrate;

namespace {
SchmidtSpectrum spec(std::vector<double> v) { return new_spectrum(v); }
const auto p532 = spec({0.5, 0.3, 0.2});
} // namespace

TEST_CASE("optimal probability") {
    CHECK(optimal_probability(p532, 3) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(optimal_probability(p532, 2) == 1.0);
    CHECK(optimal_probability(p532, 1) == 1.0);
    CHECK(optimal_probability(SchmidtSpectrum::uniform(5), 5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(optimal_probability_argmin(p532, 3) == 3);
    CHECK_THROWS_AS(optimal_probability(p532, 0), Error);
    CHECK_THROWS_AS(optimal_probability(p532, 4), Error);
}

TEST_CASE("threshold plan") {
    const auto plan = solve_plan(p532, 3);
    CHECK(plan.threshold == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(plan.cut_index == 3);
    CHECK(plan.success_prob == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(plan.failure_prob() == doctest::Approx(0.4).epsilon(1e-14));
    REQUIRE(plan.measurement_coeffs.size() == 3);
    CHECK(plan.measurement_coeffs[0] == doctest::Approx(std::sqrt(0.4)).epsilon(1e-15));
    CHECK(plan.measurement_coeffs[2] == 1.0);

    const auto u = solve_plan(spec({0.5, 0.5}), 2);
    CHECK(u.threshold == doctest::Approx(0.5));
    CHECK(u.success_prob == doctest::Approx(1.0));

    // Below the deterministic size the plan is certain.
    const auto easy = solve_plan(p532, 2);
    CHECK(easy.success_prob == 1.0);
    CHECK_THROWS_AS(solve_plan(p532, 4), Error);
}

TEST_CASE("post-measurement spectrum is flat on top") {
    const auto plan = solve_plan(p532, 3);
    const auto q    = post_measurement_spectrum(plan, p532);
    for (std::size_t i = 0; i < 3; ++i) CHECK(q[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const auto u = SchmidtSpectrum::uniform(4);
    CHECK(post_measurement_spectrum(solve_plan(u, 4), u) == u);

    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        const auto p = random_spectrum(rng, 9);
        for (std::size_t L = 1; L <= p.dim(); ++L) {
            const auto pl = solve_plan(p, L);
            const auto pm = post_measurement_spectrum(pl, p);
            if (pl.success_prob < 1.0 - 1e-12) CHECK(pm.largest() == doctest::Approx(1.0 / L).epsilon(1e-12));
            CHECK(deterministic_yield(pm) >= L);
        }
    }
}

TEST_CASE("deterministic yield") {
    CHECK(deterministic_yield(spec({0.5, 0.5})) == 2);
    CHECK(deterministic_yield(spec({0.75, 0.25})) == 1);
    CHECK(deterministic_yield(spec({0.4, 0.35, 0.25})) == 2);
    CHECK(deterministic_yield(SchmidtSpectrum::uniform(7)) == 7);
}

TEST_CASE("protocol identity on random spectra") {
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const auto p = random_spectrum(rng, rng.integer(1, 16));
        double prev  = 1.0;
        for (std::size_t L = 1; L <= p.dim(); ++L) {
            const auto plan = solve_plan(p, L);
            const double P  = optimal_probability(p, L);
            CHECK(std::abs(P - plan.success_prob) <= 1e-12);
            CHECK(std::abs(plan.success_prob - plan.threshold * L) <= 1e-12);
            CHECK(P <= prev + 1e-15);
            const auto l = optimal_probability_argmin(p, L);
            CHECK(l >= 1);
            CHECK(l <= L);
            prev = P;
        }
    }
}

#include "concentrate/error.hpp"
#include "concentrate/fidelity.hpp"
#include "concentrate/finite.hpp"
#include "concentrate/random.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace concentrate;

TEST_CASE("probability to fidelity") {
    CHECK(prob_to_fidelity(1.0, 5, 5) == 1.0);
    CHECK(prob_to_fidelity(0.5, 2, 4) == doctest::Approx(0.25));
    CHECK(prob_to_fidelity(0.93, 7, 7) == doctest::Approx(0.93));
    CHECK(prob_to_fidelity(0.6, 3, 9) < prob_to_fidelity(0.6, 3, 8));
    CHECK(prob_to_fidelity(0.6, 4, 9) > prob_to_fidelity(0.6, 3, 9));
    try {
        prob_to_fidelity(0.5, 5, 4);
        FAIL("expected SizeOrder");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::SizeOrder);
    }
}

TEST_CASE("fidelity to probability parameters") {
    const auto a = fidelity_to_prob_params(60, 0.0);
    CHECK(a.output_size == 10);
    CHECK(a.output_quality_bound == 1.0);
    const auto b = fidelity_to_prob_params(100, 0.01);
    CHECK(b.output_size == 15);
    CHECK(b.output_quality_bound == doctest::Approx(0.94));
    CHECK(b.direction == ConversionDirection::FidelityToProb);
    try {
        fidelity_to_prob_params(100, 1.0 / 6.0);
        FAIL("expected EpsTooLarge");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::EpsTooLarge);
    }
    try {
        fidelity_to_prob_params(6, 0.0);
        FAIL("expected TTooSmall");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::TTooSmall);
    }
}

TEST_CASE("trade-off bound") {
    CHECK(lemma8_bound(4, 0.25) == doctest::Approx(0.0));
    CHECK(lemma8_bound(100, 1.0) == doctest::Approx(1.9543251685646332244).epsilon(1e-15));
    CHECK(lemma8_bound(4, 0.04) < 0.0);
    for (std::size_t T = 2; T <= 5000; ++T) CHECK(lemma8_bound(T, 1.0) <= std::sqrt(static_cast<double>(T)));
}

TEST_CASE("aligned fidelity") {
    CHECK(aligned_fidelity(SchmidtSpectrum::uniform(6), 6) == doctest::Approx(1.0));
    const auto p = new_spectrum(std::vector<double>{0.5, 0.3, 0.2});
    const double s = std::sqrt(0.5) + std::sqrt(0.3) + std::sqrt(0.2);
    CHECK(aligned_fidelity(p, 3) == doctest::Approx(s * s / 3.0));
}

TEST_CASE("trade-off verification") {
    const auto u  = SchmidtSpectrum::uniform(9);
    const auto ru = verify_lemma8(u, 9);
    CHECK(ru.fidelity == doctest::Approx(1.0));
    CHECK(ru.best_sqrt_pl == doctest::Approx(3.0));
    CHECK(ru.holds);

    const auto p = new_spectrum(std::vector<double>{0.5, 0.3, 0.2});
    CHECK(verify_lemma8(p, 3).holds);
    CHECK(verify_lemma8(p, 2).holds);
    CHECK_THROWS_AS(verify_lemma8(p, 4), Error);

    Rng rng(31);
    for (int k = 0; k < 100; ++k) {
        const auto q = random_spectrum(rng, rng.integer(2, 30));
        for (std::size_t T = 2; T <= q.dim(); ++T) {
            const auto rec = verify_lemma8(q, T);
            CHECK(rec.holds);
            CHECK(rec.best_size <= T);
        }
    }
}

TEST_CASE("truncation construction") {
    const auto u  = SchmidtSpectrum::uniform(12);
    const auto ru = verify_lemma6(u, 12);
    CHECK(ru.eps == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ru.stripped == 0);
    CHECK(ru.promised_size == 2);
    CHECK(ru.all_ok());

    const auto p  = new_spectrum(std::vector<double>{0.3, 0.25, 0.25, 0.2});
    const auto rp = verify_lemma6(p, 4);
    CHECK(rp.eps > 0.0);
    CHECK(rp.eps < 1.0 / 6.0);
    CHECK(rp.mass_ok);
    CHECK(rp.max_ok);
    CHECK(rp.yield_ok);
    CHECK(rp.success_ok);

    const auto skew = new_spectrum(std::vector<double>{0.9, 0.05, 0.05});
    CHECK_THROWS_AS(verify_lemma6(skew, 3), Error);

    Rng rng(12);
    for (int k = 0; k < 60; ++k) {
        const auto q = near_uniform_spectrum(rng, rng.integer(7, 64), 0.6);
        for (std::size_t T = 7; T <= q.dim(); ++T)
            if (1.0 - aligned_fidelity(q, T) < 1.0 / 6.0) CHECK(verify_lemma6(q, T).all_ok());
    }
}

TEST_CASE("fidelity route is never worse at equal size") {
    Rng rng(5);
    for (int k = 0; k < 40; ++k) {
        const auto q = random_spectrum(rng, rng.integer(1, 12));
        for (std::size_t L = 1; L <= q.dim(); ++L) {
            const double P = optimal_probability(q, L);
            CHECK(prob_to_fidelity(P, L, L) >= P - 1e-15);
        }
    }
}

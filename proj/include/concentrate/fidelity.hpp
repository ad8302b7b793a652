#pragma once

#include "concentrate/spectrum.hpp"

#include <cstddef>
#include <vector>

namespace concentrate {

enum class ConversionDirection { ProbToFidelity, FidelityToProb };

struct FidelityConversion {
    ConversionDirection direction;
    std::size_t input_size;
    double input_quality;
    std::size_t output_size;
    double output_quality_bound;
};

/// Fidelity reachable deterministically to a size-T maximally entangled state
/// from a protocol reaching size L with probability P: P * L / T.
double prob_to_fidelity(double P, std::size_t L, std::size_t T);

/// Size and success probability reachable from fidelity 1 - eps to size T:
/// L = floor(T (1 - 6 eps) / 6), P >= 1 - 6 eps.
FidelityConversion fidelity_to_prob_params(std::size_t T, double eps);

/// (sqrt(T F) - 1) / ln T. Natural log. Negative (vacuous) when T F < 1.
double lemma8_bound(std::size_t T, double F);

/// Best fidelity of p to a size-T maximally entangled state in the aligned
/// Schmidt basis: (sum_{i<=T} sqrt(p_i))^2 / T.
double aligned_fidelity(const SchmidtSpectrum &p, std::size_t T);

struct Lemma8Record {
    std::size_t T;
    double fidelity;
    double bound;
    double best_sqrt_pl;     // max over k <= T of sqrt(P_k k)
    std::size_t best_size;   // the k attaining it
    bool holds;
};

/// Scans thresholds t = p_k (k <= T) through the finite protocol and checks
/// that some size L <= T has sqrt(P L) >= lemma8_bound(T, F).
Lemma8Record verify_lemma8(const SchmidtSpectrum &p, std::size_t T);

struct Lemma6Record {
    std::size_t T;
    double eps;
    std::size_t stripped;       // K: coefficients at or above (1+sqrt2)^2 / T
    double stripped_mass;       // delta
    double remainder_max;       // largest renormalized remaining coefficient
    std::size_t remainder_yield;// floor(1 / remainder_max)
    std::size_t promised_size;  // floor(T (1 - 6 eps) / 6)
    bool mass_ok;               // delta <= 6 eps
    bool max_ok;                // remainder_max <= 6 / (T (1 - 6 eps))
    bool yield_ok;              // remainder_yield >= promised_size
    bool success_ok;            // 1 - delta >= 1 - 6 eps
    bool all_ok() const noexcept { return mass_ok && max_ok && yield_ok && success_ok; }
};

/// Runs the truncate-then-concentrate construction behind the fidelity to
/// probability reduction on p and checks each of its four claims.
Lemma6Record verify_lemma6(const SchmidtSpectrum &p, std::size_t T);

} // namespace concentrate

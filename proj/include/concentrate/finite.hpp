#pragma once

#include "concentrate/spectrum.hpp"

#include <cstddef>
#include <vector>

namespace concentrate {

/// The solved single-copy concentration protocol for a target size L.
struct ConcentrationPlan {
    std::size_t target_size;  // L
    double threshold;         // t
    std::size_t cut_index;    // l*, 1-based: coefficients before it exceed t
    double success_prob;      // t * L
    std::vector<double> measurement_coeffs; // diagonal of the success operator, min(1, sqrt(t/p_i))

    double failure_prob() const noexcept { return 1.0 - success_prob; }
};

/// Optimal probability of reaching a maximally entangled state of size L,
/// min(1, min_{l in [1,L]} L/(L-l+1) * sum_{i>=l} p_i).
double optimal_probability(const SchmidtSpectrum &p, std::size_t L);

/// 1-based l attaining the minimum in optimal_probability (smallest on ties).
std::size_t optimal_probability_argmin(const SchmidtSpectrum &p, std::size_t L);

/// Solves L = sum_i min(1, p_i/t) exactly by scanning threshold intervals.
ConcentrationPlan solve_plan(const SchmidtSpectrum &p, std::size_t L);

/// Spectrum after a successful measurement: min(t, p_i) / P.
SchmidtSpectrum post_measurement_spectrum(const ConcentrationPlan &plan, const SchmidtSpectrum &p);

/// floor(1/p_1): the largest size reachable with certainty.
std::size_t deterministic_yield(const SchmidtSpectrum &p);

} // namespace concentrate

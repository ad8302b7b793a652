#pragma once

#include "concentrate/spectrum.hpp"
#include "concentrate/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace concentrate {

/// Distinct sequence probabilities of p^{(x)n}, each with the log2 count of
/// sequences sharing it. Groups are sorted by log_prob, descending.
struct GroupedSpectrum {
    struct Group {
        double log_prob;         // log2 probability of a single sequence
        double log_multiplicity; // log2 number of sequences
    };
    std::vector<Group> groups;
    std::uint32_t n = 0;
    double total_log_dim = 0.0; // n log2 d
};

/// Tolerance under which two sequence log-probabilities are merged into one group.
inline constexpr double kGroupMergeTolerance = 1e-12;

GroupedSpectrum grouped_spectrum(const SchmidtSpectrum &p, std::uint32_t n, double max_types = kDefaultMaxTypes);

struct ExactConcentration {
    double log2_success; // log2 P_{L_n}
    double log2_failure; // log2 (1 - P_{L_n}), from the excess mass above threshold
    double log2_threshold; // log2 t_n
    double log2_size;      // log2 L_n actually used
};

/// Optimal n-copy success probability for target size 2^{log2_L} (rounded to an
/// integer while it is exactly representable).
ExactConcentration exact_success_prob(const GroupedSpectrum &spectrum, double log2_L);
ExactConcentration exact_success_prob(const SchmidtSpectrum &p, std::uint32_t n, double log2_L,
                                      double max_types = kDefaultMaxTypes);

enum class Regime { Direct, Converse };

struct ExponentSample {
    std::uint32_t n;
    double rate_R;                          // (1/n) log2 L_n actually used
    std::optional<double> failure_exponent; // -(1/n) log2 (1-P)
    std::optional<double> success_exponent; // -(1/n) log2 P
};

/// log2 of L_n = ceil(2^{nR}) clipped to [1, d^n].
double target_log_size(double R, std::uint32_t n, std::size_t d);

/// Exact exponents for each n. Direct needs -log2 p_1 < R < H(p); Converse
/// needs H(p) < R < log2 d.
std::vector<ExponentSample> exponent_sweep(const SchmidtSpectrum &p, double R, std::span<const std::uint32_t> n_list,
                                           Regime regime, double max_types = kDefaultMaxTypes);

/// Throws RateOutOfRange unless R lies in the open interval of the regime.
void require_rate_in_regime(const SchmidtSpectrum &p, double R, Regime regime);

} // namespace concentrate

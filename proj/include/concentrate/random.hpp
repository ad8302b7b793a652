#pragma once

#include "concentrate/spectrum.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace concentrate {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64";
inline constexpr std::uint64_t kDefaultSeed     = 20010101;

/// Seeded generator whose outputs depend only on the engine bits, never on the
/// standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [lo, hi].
    std::size_t integer(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
    }

  private:
    std::mt19937_64 engine_;
};

/// Independent stream seed for worker `index` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Flat-Dirichlet sample on d symbols, with entries kept above 1e-6.
SchmidtSpectrum random_spectrum(Rng &rng, std::size_t d);

/// p_i proportional to 1 + spread (u_i - 1/2).
SchmidtSpectrum near_uniform_spectrum(Rng &rng, std::size_t d, double spread);

} // namespace concentrate

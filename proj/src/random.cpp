#include "concentrate/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace concentrate {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z               = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z               = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SchmidtSpectrum random_spectrum(Rng &rng, std::size_t d) {
    std::vector<double> w(d);
    for (double &x : w) x = -std::log1p(-rng.uniform());
    double total = 0.0;
    for (double x : w) total += x;
    for (double &x : w) x = std::max(x / total, 1e-6);
    return SchmidtSpectrum::from_values(w, true);
}

SchmidtSpectrum near_uniform_spectrum(Rng &rng, std::size_t d, double spread) {
    std::vector<double> w(d);
    for (double &x : w) x = 1.0 + spread * (rng.uniform() - 0.5);
    return SchmidtSpectrum::from_values(w, true);
}

} // namespace concentrate

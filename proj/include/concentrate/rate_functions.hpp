#pragma once

#include "concentrate/spectrum.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace concentrate {

enum class CurveRegime {
    Interior,
    SaturatedLow,  // strong-converse yield pinned at log2 d (r >= c)
    SaturatedHigh, // direct yield pinned at -log2 p_1 (r >= -log2 p_1)
    Linear,        // fidelity strong-converse beyond r'
};

std::string_view to_string(CurveRegime regime) noexcept;

struct RateCurvePoint {
    double r;
    double yield;
    CurveRegime regime;
    std::optional<double> s_star;
};

/// E(r) = min_{q: D(q||p) <= r} D(q||p) + H(q), through the tilted family.
RateCurvePoint direct_yield(const SchmidtSpectrum &p, double r);

/// E*(r) = max_{q: D(q||p) <= r} H(q), through the tilted family.
RateCurvePoint converse_yield(const SchmidtSpectrum &p, double r);

/// E_F(r); equal to E(r).
RateCurvePoint fidelity_direct_yield(const SchmidtSpectrum &p, double r);

struct RPrime {
    double value;
    bool degenerate; // E* has no slope-one point (uniform or near-uniform p)
};

/// The exponent where dE*/dr = 1, by bisection on a central-difference slope.
RPrime r_prime(const SchmidtSpectrum &p);

/// E*_F(r) = sup_{0 < x <= r} E*(x) + r - x.
RateCurvePoint fidelity_converse_yield(const SchmidtSpectrum &p, double r);
/// Same, with r' supplied (avoids recomputing it across a sweep).
RateCurvePoint fidelity_converse_yield(const SchmidtSpectrum &p, double r, const RPrime &rp);

/// Exponent r with E(r) = R, for -log2 p_1 <= R < H(p).
double inverse_direct(const SchmidtSpectrum &p, double R);

/// Exponent r with E*(r) = R, for H(p) < R < log2 d.
double inverse_converse(const SchmidtSpectrum &p, double R);

// Simplex-grid oracles. Independent of the tilted family: D and H are
// evaluated on explicit distributions q. Only d <= 3.

inline constexpr std::size_t kDefaultGridSteps = 10000;

struct BruteForceCurves {
    std::vector<double> direct;   // min D+H subject to D <= r
    std::vector<double> converse; // max H subject to D <= r
};

/// One pass over the grid for an ascending r grid.
BruteForceCurves brute_force_curves(const SchmidtSpectrum &p, std::span<const double> r_grid,
                                    std::size_t grid_steps = kDefaultGridSteps);

double brute_force_direct(const SchmidtSpectrum &p, double r, std::size_t grid_steps = kDefaultGridSteps);
double brute_force_converse(const SchmidtSpectrum &p, double r, std::size_t grid_steps = kDefaultGridSteps);

struct NonAdditivityReport {
    double r;
    double e_rho;          // E_r(rho)
    double e_sigma;        // E_r(sigma)
    double e_joint;        // E_r(rho x sigma)
    double e_half_rho;     // E_{r/2}(rho)
    double e_half_sigma;   // E_{r/2}(sigma)
    double e_rho_rho;      // E_r(rho x rho)
    double e_sigma_sigma;  // E_r(sigma x sigma)
    bool subadditive;      // e_joint <= e_half_rho + e_half_sigma
    bool half_identity;    // e_rho_rho == 2 e_half_rho and e_sigma_sigma == 2 e_half_sigma
    bool average_bound;    // e_joint <= (e_rho_rho + e_sigma_sigma) / 2
    bool superadditive;    // e_joint >= e_rho + e_sigma
    double half_identity_residual;
};

inline constexpr double kNonAdditivityTolerance = 1e-9;

NonAdditivityReport nonadditivity_report(const SchmidtSpectrum &rho, const SchmidtSpectrum &sigma, double r,
                                         double tolerance = kNonAdditivityTolerance);

} // namespace concentrate

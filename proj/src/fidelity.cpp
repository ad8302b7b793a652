#include "concentrate/fidelity.hpp"

#include "concentrate/error.hpp"
#include "concentrate/finite.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace concentrate {

namespace {

// Stripping threshold constant of the construction: (1 + sqrt 2)^2.
constexpr double kStripConstant = (1.0 + std::numbers::sqrt2) * (1.0 + std::numbers::sqrt2);

void require_t_in_range(const SchmidtSpectrum &p, std::size_t T) {
    if (T < 1 || T > p.dim())
        throw Error(ErrorCode::SizeOutOfRange, "T = " + std::to_string(T) + " outside [1, " + std::to_string(p.dim()) + "]");
}

} // namespace

double prob_to_fidelity(double P, std::size_t L, std::size_t T) {
    if (L > T) throw Error(ErrorCode::SizeOrder, "prob_to_fidelity needs L <= T");
    if (L < 1) throw Error(ErrorCode::SizeOutOfRange, "L must be >= 1");
    if (!(P > 0.0 && P <= 1.0)) throw Error(ErrorCode::InvalidArgument, "P must lie in (0, 1]");
    return P * static_cast<double>(L) / static_cast<double>(T);
}

FidelityConversion fidelity_to_prob_params(std::size_t T, double eps) {
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be >= 0");
    if (eps >= 1.0 / 6.0) throw Error(ErrorCode::EpsTooLarge, "eps must be < 1/6");
    if (T < 7) throw Error(ErrorCode::TTooSmall, "T must be >= 7");
    const double p_bound = 1.0 - 6.0 * eps;
    const auto L         = static_cast<std::size_t>(std::floor(static_cast<double>(T) * p_bound / 6.0));
    if (L < 1) throw Error(ErrorCode::TTooSmall, "T (1 - 6 eps) / 6 < 1: no output size");
    return {ConversionDirection::FidelityToProb, T, 1.0 - eps, L, p_bound};
}

double lemma8_bound(std::size_t T, double F) {
    if (T < 2) throw Error(ErrorCode::TTooSmall, "lemma8_bound needs T >= 2");
    if (!(F > 0.0 && F <= 1.0)) throw Error(ErrorCode::InvalidArgument, "F must lie in (0, 1]");
    return (std::sqrt(static_cast<double>(T) * F) - 1.0) / std::log(static_cast<double>(T));
}

double aligned_fidelity(const SchmidtSpectrum &p, std::size_t T) {
    require_t_in_range(p, T);
    double root_sum = 0.0;
    for (std::size_t i = 0; i < T; ++i) root_sum += std::sqrt(p[i]);
    return std::min(1.0, root_sum * root_sum / static_cast<double>(T));
}

Lemma8Record verify_lemma8(const SchmidtSpectrum &p, std::size_t T) {
    require_t_in_range(p, T);
    if (T < 2) throw Error(ErrorCode::TTooSmall, "verify_lemma8 needs T >= 2");
    Lemma8Record rec{};
    rec.T        = T;
    rec.fidelity = aligned_fidelity(p, T);
    rec.bound    = lemma8_bound(T, rec.fidelity);
    // Truncating at t = p_k reaches size k with P = optimal_probability >= k p_k.
    for (std::size_t k = 1; k <= T; ++k) {
        const double v = std::sqrt(optimal_probability(p, k) * static_cast<double>(k));
        if (v > rec.best_sqrt_pl) {
            rec.best_sqrt_pl = v;
            rec.best_size    = k;
        }
    }
    rec.holds = rec.best_sqrt_pl >= rec.bound;
    return rec;
}

Lemma6Record verify_lemma6(const SchmidtSpectrum &p, std::size_t T) {
    require_t_in_range(p, T);
    Lemma6Record rec{};
    rec.T   = T;
    rec.eps = std::max(0.0, 1.0 - aligned_fidelity(p, T));
    if (rec.eps >= 1.0 / 6.0) throw Error(ErrorCode::EpsTooLarge, "fidelity deficit eps >= 1/6");

    const double strip_at = kStripConstant / static_cast<double>(T);
    while (rec.stripped < p.dim() && p[rec.stripped] >= strip_at) {
        rec.stripped_mass += p[rec.stripped];
        ++rec.stripped;
    }
    const double keep   = 1.0 - rec.stripped_mass;
    const double factor = 1.0 - 6.0 * rec.eps;
    rec.promised_size   = static_cast<std::size_t>(std::floor(static_cast<double>(T) * factor / 6.0));
    if (rec.stripped < p.dim() && keep > 0.0) {
        const auto rest     = SchmidtSpectrum::from_values(p.probs().subspan(rec.stripped), true);
        rec.remainder_max   = rest.largest();
        rec.remainder_yield = deterministic_yield(rest);
    }
    rec.mass_ok    = rec.stripped_mass <= 6.0 * rec.eps;
    rec.max_ok     = rec.remainder_max > 0.0 && rec.remainder_max <= 6.0 / (static_cast<double>(T) * factor);
    rec.yield_ok   = rec.remainder_max > 0.0 && rec.remainder_yield >= rec.promised_size;
    rec.success_ok = keep >= factor;
    return rec;
}

} // namespace concentrate

#include "concentrate/finite.hpp"

#include "concentrate/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace concentrate {

namespace {

void require_size(const SchmidtSpectrum &p, std::size_t L) {
    if (L < 1 || L > p.dim())
        throw Error(ErrorCode::SizeOutOfRange,
                    "target size " + std::to_string(L) + " outside [1, " + std::to_string(p.dim()) + "]");
}

// tail[k] = sum_{i >= k} p_i (0-based), accumulated from the smallest entry.
std::vector<double> tail_sums(const SchmidtSpectrum &p) {
    std::vector<double> tail(p.dim() + 1, 0.0);
    for (std::size_t i = p.dim(); i-- > 0;) tail[i] = tail[i + 1] + p[i];
    return tail;
}

} // namespace

double optimal_probability(const SchmidtSpectrum &p, std::size_t L) {
    require_size(p, L);
    const auto tail = tail_sums(p);
    double best     = 1.0;
    for (std::size_t l = 1; l <= L; ++l) {
        const double v = static_cast<double>(L) / static_cast<double>(L - l + 1) * tail[l - 1];
        best           = std::min(best, v);
    }
    return best;
}

std::size_t optimal_probability_argmin(const SchmidtSpectrum &p, std::size_t L) {
    require_size(p, L);
    const auto tail = tail_sums(p);
    std::size_t arg = 1;
    double best     = static_cast<double>(L);
    for (std::size_t l = 2; l <= L; ++l) {
        const double v = static_cast<double>(L) / static_cast<double>(L - l + 1) * tail[l - 1];
        if (v < best) {
            best = v;
            arg  = l;
        }
    }
    return arg;
}

ConcentrationPlan solve_plan(const SchmidtSpectrum &p, std::size_t L) {
    require_size(p, L);
    const auto tail = tail_sums(p);
    // k coefficients sit strictly above t; then L = k + tail[k]/t. The smallest
    // k whose candidate reaches p_{k+1} is the unique consistent interval.
    std::size_t k = 0;
    double t      = 0.0;
    for (; k < L; ++k) {
        t = tail[k] / static_cast<double>(L - k);
        if (t >= p[k]) break;
    }
    ConcentrationPlan plan;
    plan.target_size  = L;
    plan.threshold    = t;
    plan.cut_index    = k + 1;
    plan.success_prob = std::min(1.0, t * static_cast<double>(L));
    plan.measurement_coeffs.resize(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i)
        plan.measurement_coeffs[i] = i < k ? std::sqrt(t / p[i]) : 1.0;
    return plan;
}

SchmidtSpectrum post_measurement_spectrum(const ConcentrationPlan &plan, const SchmidtSpectrum &p) {
    std::vector<double> out(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) out[i] = std::min(plan.threshold, p[i]) / plan.success_prob;
    return SchmidtSpectrum::from_values(out, true);
}

std::size_t deterministic_yield(const SchmidtSpectrum &p) {
    // Guard against 1/p_1 landing a hair below an integer (e.g. p_1 = 1/3).
    const double inv = 1.0 / p.largest();
    auto y           = static_cast<std::size_t>(std::floor(inv));
    if (static_cast<double>(y + 1) * p.largest() <= 1.0 + 1e-15) ++y;
    return std::max<std::size_t>(y, 1);
}

} // namespace concentrate

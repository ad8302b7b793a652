#include "concentrate/spectrum.hpp"

#include "concentrate/error.hpp"
#include "concentrate/log_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace concentrate {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kMaxBracket    = 1e250;

struct Tilt {
    double psi;
    double psi_prime;
    double psi_double_prime;
    double f; // D(h||p), accumulated relative to the top coefficient
    std::vector<double> h;
};

Tilt tilt(const SchmidtSpectrum &p, double s) {
    const auto probs = p.probs();
    std::vector<double> w(probs.size());
    std::vector<double> lp(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        lp[i] = std::log2(probs[i]);
        w[i]  = s * lp[i];
    }
    const double m = *std::max_element(w.begin(), w.end());
    double z       = 0.0;
    for (double &x : w) {
        x = std::exp2(x - m);
        z += x;
    }
    Tilt out{m + std::log2(z), 0.0, 0.0, 0.0, std::move(w)};
    for (double &x : out.h) x /= z;
    for (std::size_t i = 0; i < lp.size(); ++i) out.psi_prime += out.h[i] * lp[i];
    double var = 0.0;
    for (std::size_t i = 0; i < lp.size(); ++i) {
        const double dev = lp[i] - out.psi_prime;
        var += out.h[i] * dev * dev;
    }
    out.psi_double_prime = std::numbers::ln2 * var;
    // log2(h_i/p_i) = (s-1)(lp_i - lp_max) - log2 z - lp_max; no term grows with s.
    const double lp_max = *std::max_element(lp.begin(), lp.end());
    double f            = -std::log2(z) - lp_max;
    for (std::size_t i = 0; i < lp.size(); ++i)
        if (out.h[i] > 0.0) f += out.h[i] * (s - 1.0) * (lp[i] - lp_max);
    out.f = std::max(0.0, f);
    return out;
}

void require_nonnegative_s(double s) {
    if (!(s >= 0.0) || !std::isfinite(s))
        throw Error(ErrorCode::InvalidArgument, "tilt parameter s must be finite and >= 0");
}

void require_positive_r(double r) {
    if (!(r > 0.0)) throw Error(ErrorCode::NonPositiveExponent, "exponent r must be > 0");
}

// Supremum of F on s > 1: -log2(m p_1) where m counts coefficients tied with p_1.
double f_at_infinity(const SchmidtSpectrum &p) {
    std::size_t m = 0;
    while (m < p.dim() && p[m] == p.largest()) ++m;
    return -std::log2(static_cast<double>(m) * p.largest());
}

} // namespace

SchmidtSpectrum SchmidtSpectrum::from_values(std::span<const double> values, bool renormalize) {
    std::vector<double> kept;
    kept.reserve(values.size());
    for (double v : values) {
        if (std::isnan(v) || std::isinf(v))
            throw Error(ErrorCode::InvalidArgument, "spectrum entries must be finite");
        if (v < 0.0) throw Error(ErrorCode::NegativeEntry, "negative Schmidt coefficient " + std::to_string(v));
        if (v > 0.0) kept.push_back(v);
    }
    if (kept.empty()) throw Error(ErrorCode::EmptySpectrum, "spectrum has no positive entry");
    std::sort(kept.begin(), kept.end(), std::greater<>());
    // Sum smallest first for a reproducible, accurate total.
    const double total = std::accumulate(kept.rbegin(), kept.rend(), 0.0);
    if (std::abs(total - 1.0) > kNormTolerance && !renormalize)
        throw Error(ErrorCode::NotNormalized, "spectrum sums to " + std::to_string(total) + ", not 1");
    if (total != 1.0)
        for (double &v : kept) v /= total;
    return SchmidtSpectrum(std::move(kept));
}

SchmidtSpectrum SchmidtSpectrum::uniform(std::size_t d) {
    if (d == 0) throw Error(ErrorCode::EmptySpectrum, "uniform spectrum needs d >= 1");
    return SchmidtSpectrum(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

bool SchmidtSpectrum::is_uniform() const noexcept {
    return largest() - smallest() <= 1e-12 * largest();
}

SchmidtSpectrum new_spectrum(std::span<const double> values, bool renormalize) {
    return SchmidtSpectrum::from_values(values, renormalize);
}

double shannon_entropy(std::span<const double> q) {
    double h = 0.0;
    for (double x : q)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

double relative_entropy(std::span<const double> q, std::span<const double> p) {
    if (q.size() != p.size())
        throw Error(ErrorCode::DimensionMismatch, "relative_entropy: dimensions " + std::to_string(q.size()) +
                                                      " and " + std::to_string(p.size()) + " differ");
    double d = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] <= 0.0) continue;
        if (p[i] <= 0.0) return std::numeric_limits<double>::infinity();
        d += q[i] * std::log2(q[i] / p[i]);
    }
    return d;
}

double psi(const SchmidtSpectrum &p, double s) {
    require_nonnegative_s(s);
    std::vector<double> w(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) w[i] = s * std::log2(p[i]);
    return logspace::sum_exp(w);
}

PsiDerivatives psi_derivatives(const SchmidtSpectrum &p, double s) {
    require_nonnegative_s(s);
    const Tilt t = tilt(p, s);
    return {t.psi_prime, t.psi_double_prime};
}

SchmidtSpectrum tilted(const SchmidtSpectrum &p, double s) {
    require_nonnegative_s(s);
    Tilt t = tilt(p, s);
    return SchmidtSpectrum::from_values(t.h, true);
}

double big_f(const SchmidtSpectrum &p, double s) {
    require_nonnegative_s(s);
    return tilt(p, s).f;
}

double uniform_divergence(const SchmidtSpectrum &p) {
    double mean_log = 0.0;
    for (double x : p.probs()) mean_log += std::log2(x);
    mean_log /= static_cast<double>(p.dim());
    return std::max(0.0, -std::log2(static_cast<double>(p.dim())) - mean_log);
}

double deterministic_exponent(const SchmidtSpectrum &p) { return -std::log2(p.largest()); }

TiltedFamilyPoint tilted_family_point(const SchmidtSpectrum &p, double s) {
    require_nonnegative_s(s);
    Tilt t         = tilt(p, s);
    return {s, SchmidtSpectrum::from_values(t.h, true), t.psi, t.psi_prime, t.psi_double_prime, t.f};
}

std::optional<double> solve_s_plus(const SchmidtSpectrum &p, double r) {
    require_positive_r(r);
    if (p.is_uniform() || r >= f_at_infinity(p)) return std::nullopt;
    double hi = 2.0;
    while (big_f(p, hi) <= r) {
        hi *= 2.0;
        if (hi > kMaxBracket)
            throw Error(ErrorCode::BracketExceeded, "solve_s_plus: bracket exceeded s = 1e250 for r = " +
                                                        std::to_string(r));
    }
    return detail::bisect([&](double s) { return big_f(p, s); }, r, 1.0, hi, true);
}

std::optional<double> solve_s_minus(const SchmidtSpectrum &p, double r) {
    require_positive_r(r);
    if (p.is_uniform() || r >= uniform_divergence(p)) return std::nullopt;
    return detail::bisect([&](double s) { return big_f(p, s); }, r, 0.0, 1.0, false);
}

SchmidtSpectrum tensor(const SchmidtSpectrum &p, const SchmidtSpectrum &q) {
    std::vector<double> prod;
    prod.reserve(p.dim() * q.dim());
    for (double a : p.probs())
        for (double b : q.probs()) prod.push_back(a * b);
    return SchmidtSpectrum::from_values(prod, true);
}

} // namespace concentrate

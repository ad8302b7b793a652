#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace concentrate {

/// Squared Schmidt coefficients of a bipartite pure state: strictly positive,
/// sorted descending, summing to one. Zero coefficients are stripped.
class SchmidtSpectrum {
  public:
    /// Validates and canonicalizes `values`. Sums more than 1e-9 away from one
    /// are rejected unless `renormalize` is set.
    static SchmidtSpectrum from_values(std::span<const double> values, bool renormalize = false);

    static SchmidtSpectrum uniform(std::size_t d);

    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t dim() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }
    double largest() const noexcept { return probs_.front(); }
    double smallest() const noexcept { return probs_.back(); }

    /// All coefficients equal (within 1e-15 relative); F vanishes identically.
    bool is_uniform() const noexcept;

    friend bool operator==(const SchmidtSpectrum &, const SchmidtSpectrum &) = default;

  private:
    explicit SchmidtSpectrum(std::vector<double> probs) : probs_(std::move(probs)) {}
    std::vector<double> probs_;
};

/// Free-function spelling of SchmidtSpectrum::from_values.
SchmidtSpectrum new_spectrum(std::span<const double> values, bool renormalize = false);

double shannon_entropy(std::span<const double> q);
inline double shannon_entropy(const SchmidtSpectrum &p) { return shannon_entropy(p.probs()); }

/// D(q||p) in bits; q may contain zeros. +inf when q puts mass where p has none.
double relative_entropy(std::span<const double> q, std::span<const double> p);
inline double relative_entropy(const SchmidtSpectrum &q, const SchmidtSpectrum &p) {
    return relative_entropy(q.probs(), p.probs());
}

/// psi(s) = log2 sum_i p_i^s, via log-sum-exp over s*log2(p_i).
double psi(const SchmidtSpectrum &p, double s);

struct PsiDerivatives {
    double first;  // sum_i h_i(s) log2 p_i
    double second; // ln2 * Var_h(log2 p)
};
PsiDerivatives psi_derivatives(const SchmidtSpectrum &p, double s);

/// h_i(s) = p_i^s / sum_j p_j^s.
SchmidtSpectrum tilted(const SchmidtSpectrum &p, double s);

/// F(s) = -psi(s) - (1-s) psi'(s) = D(h(s)||p).
double big_f(const SchmidtSpectrum &p, double s);

/// c = D(u||p) = F(0), the exponent at which the strong-converse yield saturates.
double uniform_divergence(const SchmidtSpectrum &p);

/// -log2 p_1, the exponent at which the direct yield saturates.
double deterministic_exponent(const SchmidtSpectrum &p);

struct TiltedFamilyPoint {
    double s;
    SchmidtSpectrum h;
    double psi;
    double psi_prime;
    double psi_double_prime;
    double f_value;
};
TiltedFamilyPoint tilted_family_point(const SchmidtSpectrum &p, double s);

/// Unique s > 1 with F(s) = r, or nullopt (saturated) when r >= -log2 p_1 or
/// p is uniform. Throws NonPositiveExponent for r <= 0.
std::optional<double> solve_s_plus(const SchmidtSpectrum &p, double r);

/// Unique s in (0,1) with F(s) = r, or nullopt (saturated) when r >= c or p is
/// uniform.
std::optional<double> solve_s_minus(const SchmidtSpectrum &p, double r);

/// Pairwise products p_i q_j, sorted descending.
SchmidtSpectrum tensor(const SchmidtSpectrum &p, const SchmidtSpectrum &q);

namespace detail {
/// Bisection on a monotone function over [lo, hi] until the bracket collapses
/// to machine precision or `max_iter` is hit. `increasing` gives the sign.
template <class Fn>
double bisect(Fn &&fn, double target, double lo, double hi, bool increasing, int max_iter = 200) {
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = fn(mid);
        if (v == target) return mid;
        if ((v < target) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace detail

} // namespace concentrate

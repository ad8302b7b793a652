#include "concentrate/rate_functions.hpp"

#include "concentrate/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace concentrate {

namespace {

constexpr double kSlopeStep      = 1e-6;
constexpr double kSlopeTolerance = 1e-8;
constexpr double kMaxBracket     = 1e250;
constexpr double kFeasSlack      = 1e-12;

void require_positive(double r) {
    if (!(r > 0.0) || std::isnan(r))
        throw Error(ErrorCode::NonPositiveExponent, "exponent r must be > 0, got " + std::to_string(r));
}

// H(h(s)), summed over h directly: psi(s) - s psi'(s) cancels badly for large s.
double tilted_entropy(const SchmidtSpectrum &p, double s) { return shannon_entropy(tilted(p, s)); }

} // namespace

std::string_view to_string(CurveRegime regime) noexcept {
    switch (regime) {
    case CurveRegime::Interior: return "interior";
    case CurveRegime::SaturatedLow: return "saturated_low";
    case CurveRegime::SaturatedHigh: return "saturated_high";
    case CurveRegime::Linear: return "linear";
    }
    return "unknown";
}

RateCurvePoint direct_yield(const SchmidtSpectrum &p, double r) {
    require_positive(r);
    const double floor_value = deterministic_exponent(p);
    if (r >= floor_value) return {r, floor_value, CurveRegime::SaturatedHigh, std::nullopt};
    const auto s = solve_s_plus(p, r);
    if (!s) return {r, floor_value, CurveRegime::SaturatedHigh, std::nullopt};
    const double e = r + tilted_entropy(p, *s);
    return {r, std::max(e, floor_value), CurveRegime::Interior, s};
}

RateCurvePoint converse_yield(const SchmidtSpectrum &p, double r) {
    require_positive(r);
    const double ceiling = std::log2(static_cast<double>(p.dim()));
    if (r >= uniform_divergence(p)) return {r, ceiling, CurveRegime::SaturatedLow, std::nullopt};
    const auto s = solve_s_minus(p, r);
    if (!s) return {r, ceiling, CurveRegime::SaturatedLow, std::nullopt};
    return {r, std::min(tilted_entropy(p, *s), ceiling), CurveRegime::Interior, s};
}

RateCurvePoint fidelity_direct_yield(const SchmidtSpectrum &p, double r) { return direct_yield(p, r); }

RPrime r_prime(const SchmidtSpectrum &p) {
    if (p.is_uniform()) return {0.0, true};
    const double c = uniform_divergence(p);
    const double h = kSlopeStep;
    auto slope     = [&](double r) {
        return (converse_yield(p, r + h).yield - converse_yield(p, r - h).yield) / (2.0 * h);
    };
    double lo = 2.0 * h;
    double hi = c - 2.0 * h;
    // Too little room for the finite-difference stencil: use the envelope
    // point s = 1/2 directly.
    if (hi <= lo || slope(lo) <= 1.0) return {big_f(p, 0.5), false};
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid            = 0.5 * (lo + hi);
        const double g = slope(mid) - 1.0;
        if (std::abs(g) <= kSlopeTolerance || mid <= lo || mid >= hi) break;
        if (g > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {mid, false};
}

RateCurvePoint fidelity_converse_yield(const SchmidtSpectrum &p, double r, const RPrime &rp) {
    require_positive(r);
    const auto base = converse_yield(p, r);
    if (!rp.degenerate && r <= rp.value) return base;
    const double offset = rp.degenerate ? shannon_entropy(p) : converse_yield(p, rp.value).yield - rp.value;
    const double line   = r + offset;
    if (line <= base.yield) return base;
    return {r, line, CurveRegime::Linear, std::nullopt};
}

RateCurvePoint fidelity_converse_yield(const SchmidtSpectrum &p, double r) {
    return fidelity_converse_yield(p, r, r_prime(p));
}

double inverse_direct(const SchmidtSpectrum &p, double R) {
    const double lo = deterministic_exponent(p);
    const double H  = shannon_entropy(p);
    if (!(R >= lo && R < H))
        throw Error(ErrorCode::RateOutOfRange, "inverse_direct needs -log2 p1 = " + std::to_string(lo) +
                                                   " <= R < H(p) = " + std::to_string(H));
    if (R == lo) {
        std::size_t m = 0;
        while (m < p.dim() && p[m] == p.largest()) ++m;
        return -std::log2(static_cast<double>(m) * p.largest());
    }
    // D(h(s)||p) + H(h(s)) = -psi'(s), strictly decreasing on s > 1.
    auto cross = [&](double s) { return -psi_derivatives(p, s).first; };
    double hi  = 2.0;
    while (cross(hi) >= R) {
        hi *= 2.0;
        if (hi > kMaxBracket)
            throw Error(ErrorCode::BracketExceeded, "inverse_direct: bracket exceeded for R = " + std::to_string(R));
    }
    const double s = detail::bisect(cross, R, 1.0, hi, false);
    return big_f(p, s);
}

double inverse_converse(const SchmidtSpectrum &p, double R) {
    const double H  = shannon_entropy(p);
    const double hi = std::log2(static_cast<double>(p.dim()));
    if (!(R > H && R < hi))
        throw Error(ErrorCode::RateOutOfRange, "inverse_converse needs H(p) = " + std::to_string(H) +
                                                   " < R < log2 d = " + std::to_string(hi));
    // H(h(s)) decreases from log2 d at s = 0 to H(p) at s = 1.
    const double s = detail::bisect([&](double x) { return tilted_entropy(p, x); }, R, 0.0, 1.0, false);
    return big_f(p, s);
}

// ---------------------------------------------------------------------------
// Simplex-grid oracles

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

struct Objectives {
    double divergence; // D(q||p)
    double cross;      // -sum q log2 p = D + H
    double entropy;    // H(q)
};

template <std::size_t D>
Objectives evaluate(const std::array<double, D> &q, const std::array<double, D> &logp) {
    Objectives o{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < D; ++i) {
        o.entropy -= xlog2x(q[i]);
        if (q[i] > 0.0) o.cross -= q[i] * logp[i];
    }
    o.divergence = o.cross - o.entropy;
    return o;
}

// Along a segment parametrized by x in [lo, hi], D is convex with its minimum
// at x_star. Returns the feasible sub-interval {D <= r}, if any.
template <class Div>
bool feasible_interval(Div &&div, double lo, double x_star, double hi, double r, double &left, double &right) {
    if (div(x_star) > r + kFeasSlack) return false;
    auto edge = [&](double inside, double outside) {
        if (div(outside) <= r + kFeasSlack) return outside;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (inside + outside);
            if (mid == inside || mid == outside) break;
            if (div(mid) <= r)
                inside = mid;
            else
                outside = mid;
        }
        return inside;
    };
    left  = edge(x_star, lo);
    right = edge(x_star, hi);
    return true;
}

struct CurveAccumulator {
    std::span<const double> r_grid;
    std::vector<double> direct;
    std::vector<double> converse;

    explicit CurveAccumulator(std::span<const double> grid)
        : r_grid(grid), direct(grid.size(), std::numeric_limits<double>::infinity()),
          converse(grid.size(), -std::numeric_limits<double>::infinity()) {}

    // Credits a feasible point to the first r that admits it; a prefix pass
    // later propagates it to every larger r.
    void add_point(const Objectives &o) {
        const auto it = std::lower_bound(r_grid.begin(), r_grid.end(), o.divergence - kFeasSlack);
        if (it == r_grid.end()) return;
        const auto j = static_cast<std::size_t>(it - r_grid.begin());
        direct[j]    = std::min(direct[j], o.cross);
        converse[j]  = std::max(converse[j], o.entropy);
    }

    void add_at(std::size_t j, const Objectives &o) {
        direct[j]   = std::min(direct[j], o.cross);
        converse[j] = std::max(converse[j], o.entropy);
    }

    BruteForceCurves finish() {
        for (std::size_t j = 1; j < r_grid.size(); ++j) {
            direct[j]   = std::min(direct[j], direct[j - 1]);
            converse[j] = std::max(converse[j], converse[j - 1]);
        }
        return {std::move(direct), std::move(converse)};
    }
};

} // namespace

BruteForceCurves brute_force_curves(const SchmidtSpectrum &p, std::span<const double> r_grid, std::size_t grid_steps) {
    if (p.dim() > 3)
        throw Error(ErrorCode::DimensionTooLarge, "simplex-grid oracle supports d <= 3, got " + std::to_string(p.dim()));
    if (grid_steps < 1000) throw Error(ErrorCode::InvalidArgument, "grid_steps must be >= 1000");
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        require_positive(r_grid[j]);
        if (j > 0 && r_grid[j] < r_grid[j - 1])
            throw Error(ErrorCode::InvalidArgument, "r grid must be ascending");
    }
    CurveAccumulator acc(r_grid);
    const std::size_t N  = grid_steps;
    const double inv_n   = 1.0 / static_cast<double>(N);

    if (p.dim() == 1) {
        for (std::size_t j = 0; j < r_grid.size(); ++j) acc.add_at(j, {0.0, 0.0, 0.0});
        return acc.finish();
    }

    if (p.dim() == 2) {
        const std::array<double, 2> logp{std::log2(p[0]), std::log2(p[1])};
        auto at = [&](double x) { return evaluate<2>({x, 1.0 - x}, logp); };
        for (std::size_t i = 0; i <= N; ++i) acc.add_point(at(static_cast<double>(i) * inv_n));
        auto div = [&](double x) { return at(x).divergence; };
        for (std::size_t j = 0; j < r_grid.size(); ++j) {
            double left = 0.0, right = 0.0;
            if (!feasible_interval(div, 0.0, p[0], 1.0, r_grid[j], left, right)) continue;
            acc.add_at(j, at(left));
            acc.add_at(j, at(right));
            acc.add_at(j, at(std::clamp(0.5, left, right)));
        }
        return acc.finish();
    }

    const std::array<double, 3> logp{std::log2(p[0]), std::log2(p[1]), std::log2(p[2])};
    // Literal grid pass with tabulated terms.
    std::vector<double> xlx(N + 1);
    std::array<std::vector<double>, 3> lin;
    for (auto &v : lin) v.resize(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        const double x = static_cast<double>(k) * inv_n;
        xlx[k]         = xlog2x(x);
        for (std::size_t c = 0; c < 3; ++c) lin[c][k] = k == 0 ? 0.0 : x * logp[c];
    }
    for (std::size_t i = 0; i <= N; ++i) {
        for (std::size_t j = 0; i + j <= N; ++j) {
            const std::size_t k = N - i - j;
            Objectives o;
            o.cross      = -(lin[0][i] + lin[1][j] + lin[2][k]);
            o.entropy    = -(xlx[i] + xlx[j] + xlx[k]);
            o.divergence = o.cross - o.entropy;
            acc.add_point(o);
        }
    }
    // Boundary refinement: on each grid line q_1 = a the feasible set is an
    // interval; its endpoints and the entropy peak are evaluated exactly.
    const double tail_ratio = p[1] / (p[1] + p[2]);
    struct Slice {
        bool feasible = false;
        Objectives low;  // smallest D+H on the slice
        Objectives high; // largest H on the slice
    };
    auto slice = [&](double a, double r) {
        const double rest = std::max(0.0, 1.0 - a);
        auto at           = [&](double x) { return evaluate<3>({a, x, std::max(0.0, rest - x)}, logp); };
        auto div          = [&](double x) { return at(x).divergence; };
        Slice out;
        double left = 0.0, right = 0.0;
        if (!feasible_interval(div, 0.0, rest * tail_ratio, rest, r, left, right)) return out;
        const auto ol = at(left), orr = at(right), oc = at(std::clamp(0.5 * rest, left, right));
        out.feasible = true;
        out.low      = ol.cross <= orr.cross ? ol : orr;
        out.high     = oc;
        for (const auto *o : {&ol, &orr})
            if (o->entropy > out.high.entropy) out.high = *o;
        return out;
    };
    constexpr auto npos = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> best_low(r_grid.size(), npos), best_high(r_grid.size(), npos);
    std::vector<double> low_val(r_grid.size(), std::numeric_limits<double>::infinity());
    std::vector<double> high_val(r_grid.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i <= N; ++i) {
        const double a = static_cast<double>(i) * inv_n;
        // Feasibility only grows with r: walk the grid downward and stop at
        // the first empty slice.
        for (std::size_t j = r_grid.size(); j-- > 0;) {
            const auto sl = slice(a, r_grid[j]);
            if (!sl.feasible) break;
            acc.add_at(j, sl.low);
            acc.add_at(j, sl.high);
            if (sl.low.cross < low_val[j]) low_val[j] = sl.low.cross, best_low[j] = i;
            if (sl.high.entropy > high_val[j]) high_val[j] = sl.high.entropy, best_high[j] = i;
        }
    }
    // The slice optimum is convex (D+H) or concave (H) in a, so a golden-section
    // search between the neighbours of the best line finishes the job.
    auto golden = [&](std::size_t i, auto &&value) {
        double lo = static_cast<double>(i == 0 ? 0 : i - 1) * inv_n;
        double hi = std::min(1.0, static_cast<double>(i + 1) * inv_n);
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
        double fc = value(c), fd = value(d);
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            if (fc <= fd) {
                hi = d, d = c, fd = fc;
                c  = hi - g * (hi - lo), fc = value(c);
            } else {
                lo = c, c = d, fc = fd;
                d  = lo + g * (hi - lo), fd = value(d);
            }
        }
    };
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        const double r = r_grid[j];
        if (best_low[j] != npos)
            golden(best_low[j], [&](double a) {
                const auto sl = slice(a, r);
                if (!sl.feasible) return std::numeric_limits<double>::infinity();
                acc.add_at(j, sl.low);
                return sl.low.cross;
            });
        if (best_high[j] != npos)
            golden(best_high[j], [&](double a) {
                const auto sl = slice(a, r);
                if (!sl.feasible) return std::numeric_limits<double>::infinity();
                acc.add_at(j, sl.high);
                return -sl.high.entropy;
            });
    }
    return acc.finish();
}

double brute_force_direct(const SchmidtSpectrum &p, double r, std::size_t grid_steps) {
    const double grid[] = {r};
    return brute_force_curves(p, grid, grid_steps).direct.front();
}

double brute_force_converse(const SchmidtSpectrum &p, double r, std::size_t grid_steps) {
    const double grid[] = {r};
    return brute_force_curves(p, grid, grid_steps).converse.front();
}

NonAdditivityReport nonadditivity_report(const SchmidtSpectrum &rho, const SchmidtSpectrum &sigma, double r,
                                         double tolerance) {
    require_positive(r);
    NonAdditivityReport rep{};
    rep.r             = r;
    rep.e_rho         = direct_yield(rho, r).yield;
    rep.e_sigma       = direct_yield(sigma, r).yield;
    rep.e_joint       = direct_yield(tensor(rho, sigma), r).yield;
    rep.e_half_rho    = direct_yield(rho, 0.5 * r).yield;
    rep.e_half_sigma  = direct_yield(sigma, 0.5 * r).yield;
    rep.e_rho_rho     = direct_yield(tensor(rho, rho), r).yield;
    rep.e_sigma_sigma = direct_yield(tensor(sigma, sigma), r).yield;
    rep.half_identity_residual =
        std::max(std::abs(rep.e_rho_rho - 2.0 * rep.e_half_rho), std::abs(rep.e_sigma_sigma - 2.0 * rep.e_half_sigma));
    rep.subadditive   = rep.e_joint <= rep.e_half_rho + rep.e_half_sigma + tolerance;
    rep.half_identity = rep.half_identity_residual <= tolerance;
    rep.average_bound = rep.e_joint <= 0.5 * (rep.e_rho_rho + rep.e_sigma_sigma) + tolerance;
    rep.superadditive = rep.e_joint >= rep.e_rho + rep.e_sigma - tolerance;
    return rep;
}

} // namespace concentrate

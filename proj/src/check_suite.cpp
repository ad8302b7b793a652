#include "concentrate/fidelity.hpp"
#include "concentrate/finite.hpp"
#include "concentrate/harness.hpp"
#include "concentrate/log_space.hpp"
#include "concentrate/random.hpp"
#include "concentrate/rate_functions.hpp"
#include "concentrate/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace concentrate {

namespace {

struct Outcome {
    std::int64_t cases = 0;
    double worst       = 0.0; // largest violation observed; 0 when every case holds

    void record(double violation) {
        ++cases;
        if (!(violation <= worst)) worst = std::isnan(violation) ? std::numeric_limits<double>::infinity() : violation;
    }
    void require(bool ok) { record(ok ? 0.0 : 1.0); }
};

struct Property {
    std::string_view name;
    std::string_view module;
    double tolerance;
    std::function<Outcome(Rng &)> run;
};

double uniform_in(Rng &rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

SchmidtSpectrum draw(Rng &rng, std::size_t dmin, std::size_t dmax) {
    return random_spectrum(rng, rng.integer(dmin, dmax));
}

double divergence_of(const std::vector<double> &q, std::span<const double> p) { return relative_entropy(q, p); }

// ---------------------------------------------------------------------------
// distributions

Outcome psi_convexity(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 50; ++k) {
        const auto p = draw(rng, 2, 8);
        for (int j = 0; j < 20; ++j) {
            const double a = uniform_in(rng, 0.0, 6.0), b = uniform_in(rng, 0.0, 6.0);
            o.record(psi(p, 0.5 * (a + b)) - 0.5 * (psi(p, a) + psi(p, b)));
        }
    }
    return o;
}

Outcome f_monotone(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 50; ++k) {
        const auto p = draw(rng, 2, 8);
        double prev  = big_f(p, 1.0);
        for (int i = 1; i <= 100; ++i) {
            const double f = big_f(p, 1.0 + 0.1 * i);
            o.record(prev - f);
            prev = f;
        }
        prev = big_f(p, 0.0);
        for (int i = 1; i <= 100; ++i) {
            const double f = big_f(p, 0.01 * i);
            o.record(f - prev);
            prev = f;
        }
    }
    return o;
}

Outcome f_is_divergence(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 200; ++k) {
        const auto p   = draw(rng, 2, 10);
        const double s = uniform_in(rng, 0.0, 8.0);
        o.record(std::abs(big_f(p, s) - relative_entropy(tilted(p, s), p)));
    }
    return o;
}

Outcome solver_round_trip(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 100; ++k) {
        const auto p = draw(rng, 2, 8);
        const double rp = uniform_in(rng, 0.01, 0.99) * big_f(p, 1e3);
        if (auto s = solve_s_plus(p, rp)) o.record(std::abs(big_f(p, *s) - rp));
        const double rm = uniform_in(rng, 0.01, 0.99) * uniform_divergence(p);
        if (auto s = solve_s_minus(p, rm)) o.record(std::abs(big_f(p, *s) - rm));
    }
    return o;
}

Outcome tilted_entropy_identity(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 200; ++k) {
        const auto p = draw(rng, 2, 8);
        double s     = uniform_in(rng, 0.0, 5.0);
        if (std::abs(s - 1.0) < 0.1) s += 0.2;
        const double lhs = shannon_entropy(tilted(p, s));
        o.record(std::abs(lhs - (s * big_f(p, s) + psi(p, s)) / (1.0 - s)));
    }
    return o;
}

// ---------------------------------------------------------------------------
// finite concentration

template <class Fn>
Outcome each_plan(Rng &rng, int spectra, Fn &&fn) {
    Outcome o;
    for (int k = 0; k < spectra; ++k) {
        const auto p = draw(rng, 1, 16);
        for (std::size_t L = 1; L <= p.dim(); ++L) fn(o, p, L);
    }
    return o;
}

Outcome protocol_identity(Rng &rng) {
    return each_plan(rng, 200, [](Outcome &o, const SchmidtSpectrum &p, std::size_t L) {
        o.record(std::abs(optimal_probability(p, L) - solve_plan(p, L).success_prob));
    });
}

Outcome threshold_identity(Rng &rng) {
    return each_plan(rng, 200, [](Outcome &o, const SchmidtSpectrum &p, std::size_t L) {
        const auto plan = solve_plan(p, L);
        o.record(std::abs(plan.success_prob - plan.threshold * static_cast<double>(L)));
    });
}

Outcome probability_monotone(Rng &rng) {
    return each_plan(rng, 200, [](Outcome &o, const SchmidtSpectrum &p, std::size_t L) {
        if (L < p.dim()) o.record(optimal_probability(p, L + 1) - optimal_probability(p, L));
    });
}

Outcome argmin_at_cut(Rng &rng) {
    return each_plan(rng, 200, [](Outcome &o, const SchmidtSpectrum &p, std::size_t L) {
        const auto plan      = solve_plan(p, L);
        const std::size_t l  = optimal_probability_argmin(p, L);
        if (l < 1 || l > L || plan.cut_index < 1 || plan.cut_index > L) {
            o.record(1.0);
            return;
        }
        if (plan.success_prob >= 1.0) return;
        double tail = 0.0;
        for (std::size_t i = p.dim(); i-- > plan.cut_index - 1;) tail += p[i];
        const double at_cut = static_cast<double>(L) / static_cast<double>(L - plan.cut_index + 1) * tail;
        o.record(std::abs(at_cut - optimal_probability(p, L)));
    });
}

Outcome post_measurement_top(Rng &rng) {
    return each_plan(rng, 200, [](Outcome &o, const SchmidtSpectrum &p, std::size_t L) {
        const auto plan = solve_plan(p, L);
        const auto q    = post_measurement_spectrum(plan, p);
        double v        = 0.0;
        for (std::size_t i = 0; i + 1 < plan.cut_index && i < q.dim(); ++i) v = std::max(v, std::abs(q[i] - q[0]));
        for (std::size_t i = 0; i < q.dim(); ++i) v = std::max(v, q[i] - q[0]);
        o.record(v);
    });
}

// ---------------------------------------------------------------------------
// method of types

Outcome type_count(Rng &) {
    Outcome o;
    for (std::uint32_t n = 1; n <= 60; ++n)
        for (std::size_t d = 1; d <= 4; ++d)
            o.record(std::log2(count_types(n, d)) - static_cast<double>(d) * std::log2(n + 1.0));
    return o;
}

template <class Fn>
void each_type(std::uint32_t max_n, Fn &&fn) {
    for (std::size_t d = 2; d <= 3; ++d)
        for (std::uint32_t n = 1; n <= max_n; ++n)
            for (const auto &t : enumerate_types(n, d)) fn(t);
}

Outcome sequence_prob(Rng &rng) {
    Outcome o;
    for (std::size_t d = 2; d <= 3; ++d)
        for (std::uint32_t n = 1; n <= 40; n += 3) {
            const auto q = random_spectrum(rng, d);
            for (const auto &t : enumerate_types(n, d)) {
                const auto e = t.empirical();
                const double expect = -static_cast<double>(n) * (shannon_entropy(e) + divergence_of(e, q.probs()));
                o.record(std::abs(log_sequence_prob(t, q) - expect));
            }
        }
    return o;
}

Outcome class_size(Rng &) {
    Outcome o;
    each_type(40, [&](const TypeComposition &t) {
        const double nh  = t.n * shannon_entropy(t.empirical());
        const double lsz = log_type_class_size(t);
        o.record(std::max(lsz - nh, nh - static_cast<double>(t.dim()) * std::log2(t.n + 1.0) - lsz));
    });
    return o;
}

Outcome class_prob(Rng &rng) {
    Outcome o;
    for (std::size_t d = 2; d <= 3; ++d)
        for (std::uint32_t n = 1; n <= 40; ++n)
            for (int j = 0; j < 20; ++j) {
                const auto q = random_spectrum(rng, d);
                for (const auto &t : enumerate_types(n, d)) {
                    const double nd = t.n * divergence_of(t.empirical(), q.probs());
                    const double lp = log_type_class_prob(t, q);
                    o.record(std::max(lp + nd, -nd - static_cast<double>(d) * std::log2(n + 1.0) - lp));
                }
            }
    return o;
}

Outcome completeness(Rng &rng) {
    Outcome o;
    for (std::size_t d = 2; d <= 3; ++d)
        for (std::uint32_t n = 1; n <= 40; ++n) {
            const auto q = random_spectrum(rng, d);
            std::vector<double> terms;
            for (const auto &t : enumerate_types(n, d)) terms.push_back(log_type_class_prob(t, q));
            o.record(std::abs(std::exp2(logspace::sum_exp(terms)) - 1.0));
        }
    return o;
}

// ---------------------------------------------------------------------------
// i.i.d. exact concentration

Outcome single_copy_agreement(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 100; ++k) {
        const auto p = draw(rng, 1, 10);
        for (std::size_t L = 1; L <= p.dim(); ++L) {
            const auto ex = exact_success_prob(p, 1, std::log2(static_cast<double>(L)));
            o.record(std::abs(std::exp2(ex.log2_success) - optimal_probability(p, L)));
        }
    }
    return o;
}

template <class Fn>
Outcome each_size(Rng &rng, Fn &&fn) {
    Outcome o;
    for (int k = 0; k < 20; ++k) {
        const auto p          = draw(rng, 2, 3);
        const std::uint32_t n = static_cast<std::uint32_t>(rng.integer(2, 12));
        const auto g          = grouped_spectrum(p, n);
        const double top      = std::pow(static_cast<double>(p.dim()), n);
        const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(top / 400.0));
        for (std::size_t L = 1; L <= static_cast<std::size_t>(top); L += stride) fn(o, g, L);
    }
    return o;
}

Outcome exact_monotone(Rng &rng) {
    return each_size(rng, [](Outcome &o, const GroupedSpectrum &g, std::size_t L) {
        if (std::log2(static_cast<double>(L + 1)) > g.total_log_dim) return;
        const double a = exact_success_prob(g, std::log2(static_cast<double>(L))).log2_success;
        const double b = exact_success_prob(g, std::log2(static_cast<double>(L + 1))).log2_success;
        o.record(b - a);
    });
}

Outcome exact_threshold_identity(Rng &rng) {
    return each_size(rng, [](Outcome &o, const GroupedSpectrum &g, std::size_t L) {
        const auto ex = exact_success_prob(g, std::log2(static_cast<double>(L)));
        if (ex.log2_success < 0.0) o.record(std::abs(ex.log2_success - ex.log2_threshold - ex.log2_size));
    });
}

struct TypeExtremes {
    double min_d_below = std::numeric_limits<double>::infinity(); // min D over D+H <= Rn
    double max_h_below = -std::numeric_limits<double>::infinity(); // max H over D+H < Rn
    double min_d_above = std::numeric_limits<double>::infinity(); // min D over D+H >= Rn
};

TypeExtremes type_extremes(const SchmidtSpectrum &p, std::uint32_t n, double rn) {
    TypeExtremes x;
    for (const auto &t : enumerate_types(n, p.dim())) {
        const auto e    = t.empirical();
        const double h  = shannon_entropy(e);
        const double dv = divergence_of(e, p.probs());
        const double ce = h + dv; // -(1/n) log2 of one sequence's probability
        if (ce <= rn) x.min_d_below = std::min(x.min_d_below, dv);
        if (ce < rn) x.max_h_below = std::max(x.max_h_below, h);
        if (ce >= rn) x.min_d_above = std::min(x.min_d_above, dv);
    }
    return x;
}

Outcome direct_finite_bound(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 12; ++k) {
        const auto p = draw(rng, 2, 3);
        if (p.is_uniform()) continue;
        const double R = uniform_in(rng, deterministic_exponent(p), shannon_entropy(p));
        for (std::uint32_t n : {10u, 40u, 120u}) {
            const auto ex = exact_success_prob(p, n, target_log_size(R, n, p.dim()));
            if (ex.log2_failure == logspace::neg_inf) {
                o.record(0.0);
                continue;
            }
            const double rn    = -ex.log2_threshold / n;
            const auto x       = type_extremes(p, n, rn);
            const double bound = x.min_d_below - static_cast<double>(p.dim()) * std::log2(n + 1.0) / n;
            o.record(bound - (-ex.log2_failure / n));
        }
    }
    return o;
}

Outcome converse_finite_bound(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 12; ++k) {
        const auto p = draw(rng, 2, 3);
        const double R = uniform_in(rng, shannon_entropy(p), std::log2(static_cast<double>(p.dim())));
        for (std::uint32_t n : {10u, 40u, 120u}) {
            const auto ex   = exact_success_prob(p, n, target_log_size(R, n, p.dim()));
            const double rn = -ex.log2_threshold / n;
            const auto x    = type_extremes(p, n, rn);
            const double a  = n * (x.max_h_below - rn);
            const double b  = -static_cast<double>(n) * x.min_d_above;
            const double bound = static_cast<double>(p.dim()) * std::log2(n + 1.0) + logspace::add(a, b);
            o.record((ex.log2_success - bound) / n);
        }
    }
    return o;
}

// ---------------------------------------------------------------------------
// rate functions

Outcome direct_monotone(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 30; ++k) {
        const auto p = draw(rng, 2, 8);
        const double top = deterministic_exponent(p);
        double prev      = direct_yield(p, top / 101.0).yield;
        for (int i = 2; i <= 100; ++i) {
            const double e = direct_yield(p, top * i / 101.0).yield;
            o.record(e - prev);
            prev = e;
        }
    }
    return o;
}

Outcome converse_monotone(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 30; ++k) {
        const auto p = draw(rng, 2, 8);
        const double top = uniform_divergence(p);
        double prev      = converse_yield(p, top / 101.0).yield;
        for (int i = 2; i <= 100; ++i) {
            const double e = converse_yield(p, top * i / 101.0).yield;
            o.record(prev - e);
            prev = e;
        }
    }
    return o;
}

Outcome endpoint_limits(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 50; ++k) {
        const auto p   = draw(rng, 2, 8);
        const double h = shannon_entropy(p);
        o.record(std::abs(direct_yield(p, 1e-12).yield - h));
        o.record(std::abs(converse_yield(p, 1e-12).yield - h));
    }
    return o;
}

Outcome saturation_exact(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 50; ++k) {
        const auto p   = draw(rng, 2, 8);
        const double a = deterministic_exponent(p), c = uniform_divergence(p);
        for (double f : {1.0, 1.5, 3.0}) {
            o.record(std::abs(direct_yield(p, a * f).yield - a));
            o.record(std::abs(converse_yield(p, c * f).yield - std::log2(static_cast<double>(p.dim()))));
        }
    }
    return o;
}

Outcome inverse_direct_round_trip(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 50; ++k) {
        const auto p = draw(rng, 2, 8);
        const double r = uniform_in(rng, 0.02, 0.9) * deterministic_exponent(p);
        const auto e   = direct_yield(p, r);
        if (e.regime == CurveRegime::Interior) o.record(std::abs(inverse_direct(p, e.yield) - r));
    }
    return o;
}

Outcome inverse_converse_round_trip(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 50; ++k) {
        const auto p = draw(rng, 2, 8);
        const double r = uniform_in(rng, 0.02, 0.9) * uniform_divergence(p);
        const auto e   = converse_yield(p, r);
        if (e.regime == CurveRegime::Interior) o.record(std::abs(inverse_converse(p, e.yield) - r));
    }
    return o;
}

Outcome brute_force_agreement(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 6; ++k) {
        const auto p     = draw(rng, 2, 3);
        const double top = 1.2 * std::max(deterministic_exponent(p), uniform_divergence(p));
        const auto grid  = linear_grid(top / 20.0, top, 20);
        const auto bf    = brute_force_curves(p, grid, 2000);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            o.record(std::abs(direct_yield(p, grid[i]).yield - bf.direct[i]));
            o.record(std::abs(converse_yield(p, grid[i]).yield - bf.converse[i]));
        }
    }
    return o;
}

Outcome fidelity_converse_envelope(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 30; ++k) {
        const auto p  = draw(rng, 2, 8);
        const auto rp = r_prime(p);
        const double top = 1.5 * uniform_divergence(p);
        for (int i = 1; i <= 50; ++i) {
            const double r  = top * i / 50.0;
            const double ef = fidelity_converse_yield(p, r, rp).yield;
            const double e  = converse_yield(p, r).yield;
            o.record(e - ef);
            if (!rp.degenerate && r <= rp.value) o.record(std::abs(ef - e));
        }
    }
    return o;
}

Outcome yield_lower_bounds(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 30; ++k) {
        const auto p   = draw(rng, 2, 8);
        const double a = deterministic_exponent(p), h = shannon_entropy(p);
        for (int i = 1; i <= 50; ++i) {
            const double r = 2.0 * std::max(a, uniform_divergence(p)) * i / 50.0;
            o.record(a - direct_yield(p, r).yield);
            o.record(h - converse_yield(p, r).yield);
        }
    }
    return o;
}

// ---------------------------------------------------------------------------
// fidelity

Outcome prob_to_fidelity_monotone(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 500; ++k) {
        const std::size_t T = rng.integer(2, 100);
        const std::size_t L = rng.integer(1, T - 1);
        const double P      = uniform_in(rng, 0.0, 0.99);
        const double f      = prob_to_fidelity(P, L, T);
        o.record(f - prob_to_fidelity(P + 0.01, L, T));
        o.record(f - prob_to_fidelity(P, L + 1, T));
        o.record(prob_to_fidelity(P, L, T + 1) - f);
    }
    return o;
}

Outcome fidelity_route_composition(Rng &rng) {
    return each_plan(rng, 50, [](Outcome &o, const SchmidtSpectrum &p, std::size_t L) {
        const double P = optimal_probability(p, L);
        o.record(P - prob_to_fidelity(P, L, L));
    });
}

Outcome truncation(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 40; ++k) {
        const auto p = near_uniform_spectrum(rng, rng.integer(8, 64), uniform_in(rng, 0.0, 0.5));
        for (std::size_t T = 7; T <= p.dim(); ++T)
            if (1.0 - aligned_fidelity(p, T) < 1.0 / 6.0) o.require(verify_lemma6(p, T).all_ok());
    }
    return o;
}

Outcome tradeoff(Rng &rng) {
    Outcome o;
    for (int k = 0; k < 40; ++k) {
        const auto p = draw(rng, 2, 24);
        for (std::size_t T = 2; T <= p.dim(); ++T) o.require(verify_lemma8(p, T).holds);
    }
    return o;
}

Outcome tradeoff_cap(Rng &) {
    Outcome o;
    for (std::size_t T = 2; T <= 2000; ++T) o.record(lemma8_bound(T, 1.0) - std::sqrt(static_cast<double>(T)));
    return o;
}

// ---------------------------------------------------------------------------
// non-additivity

template <class Fn>
Outcome each_triple(Rng &rng, Fn &&fn) {
    Outcome o;
    for (int k = 0; k < 40; ++k) {
        const auto rho   = draw(rng, 2, 3);
        const auto sigma = draw(rng, 2, 3);
        const double r   = uniform_in(rng, 0.01, 1.0);
        fn(o, nonadditivity_report(rho, sigma, r));
    }
    return o;
}

Outcome half_identity(Rng &rng) {
    return each_triple(rng, [](Outcome &o, const NonAdditivityReport &x) { o.record(x.half_identity_residual); });
}
Outcome subadditivity(Rng &rng) {
    return each_triple(rng, [](Outcome &o, const NonAdditivityReport &x) { o.require(x.subadditive); });
}
Outcome average_bound(Rng &rng) {
    return each_triple(rng, [](Outcome &o, const NonAdditivityReport &x) { o.require(x.average_bound); });
}
Outcome superadditivity(Rng &rng) {
    return each_triple(rng, [](Outcome &o, const NonAdditivityReport &x) { o.require(x.superadditive); });
}

const std::vector<Property> &properties() {
    static const std::vector<Property> all = {
        {"psi_convex", "distributions", 1e-12, psi_convexity},
        {"f_monotone_each_side", "distributions", 1e-12, f_monotone},
        {"f_equals_tilted_divergence", "distributions", 1e-10, f_is_divergence},
        {"tilt_solver_round_trip", "distributions", 1e-10, solver_round_trip},
        {"tilted_entropy_identity", "distributions", 1e-10, tilted_entropy_identity},
        {"protocol_identity", "finite_concentration", 1e-12, protocol_identity},
        {"threshold_identity", "finite_concentration", 1e-12, threshold_identity},
        {"probability_monotone_in_size", "finite_concentration", 1e-12, probability_monotone},
        {"argmin_at_cut_index", "finite_concentration", 1e-12, argmin_at_cut},
        {"post_measurement_top_flat", "finite_concentration", 1e-12, post_measurement_top},
        {"type_count_bound", "method_of_types", 0.0, type_count},
        {"sequence_probability_identity", "method_of_types", 1e-9, sequence_prob},
        {"type_class_size_bounds", "method_of_types", 1e-9, class_size},
        {"type_class_probability_bounds", "method_of_types", 1e-9, class_prob},
        {"type_partition_complete", "method_of_types", 1e-10, completeness},
        {"single_copy_agreement", "iid_exact", 1e-12, single_copy_agreement},
        {"exact_monotone_in_size", "iid_exact", 1e-12, exact_monotone},
        {"exact_threshold_identity", "iid_exact", 1e-10, exact_threshold_identity},
        {"direct_finite_bound", "iid_exact", 1e-9, direct_finite_bound},
        {"converse_finite_bound", "iid_exact", 1e-9, converse_finite_bound},
        {"direct_yield_decreasing", "rate_functions", 1e-12, direct_monotone},
        {"converse_yield_increasing", "rate_functions", 1e-12, converse_monotone},
        {"yield_endpoint_limits", "rate_functions", 1e-4, endpoint_limits},
        {"yield_saturation_exact", "rate_functions", 0.0, saturation_exact},
        {"inverse_direct_round_trip", "rate_functions", 1e-8, inverse_direct_round_trip},
        {"inverse_converse_round_trip", "rate_functions", 1e-8, inverse_converse_round_trip},
        {"simplex_oracle_agreement", "rate_functions", 2e-4, brute_force_agreement},
        {"fidelity_converse_envelope", "rate_functions", 1e-8, fidelity_converse_envelope},
        {"yield_lower_bounds", "rate_functions", 1e-12, yield_lower_bounds},
        {"prob_to_fidelity_monotone", "fidelity_bounds", 0.0, prob_to_fidelity_monotone},
        {"fidelity_route_not_worse", "fidelity_bounds", 1e-15, fidelity_route_composition},
        {"truncation_construction", "fidelity_bounds", 0.0, truncation},
        {"fidelity_size_tradeoff", "fidelity_bounds", 0.0, tradeoff},
        {"tradeoff_bound_below_sqrt_size", "fidelity_bounds", 0.0, tradeoff_cap},
        {"half_exponent_identity", "rate_functions", kNonAdditivityTolerance, half_identity},
        {"product_subadditive", "rate_functions", 0.0, subadditivity},
        {"product_average_bound", "rate_functions", 0.0, average_bound},
        {"product_superadditive", "rate_functions", 0.0, superadditivity},
    };
    return all;
}

} // namespace

ExperimentRecord run_check_suite(const CheckSuiteConfig &cfg) {
    const auto &props = properties();
    const auto results = parallel_map<Outcome>(
        props.size(),
        [&](std::size_t i) {
            Rng rng(derive_seed(cfg.seed, i));
            try {
                return props[i].run(rng);
            } catch (const std::exception &) {
                // An escaped domain error is itself a violation of the property.
                Outcome o;
                o.record(std::numeric_limits<double>::infinity());
                return o;
            }
        },
        cfg.threads);

    ExperimentRecord rec;
    rec.meta              = base_meta("check");
    rec.meta["rng"]       = kRngAlgorithm;
    rec.meta["seed"]      = cfg.seed;
    rec.meta["tolerance_override"] = cfg.tolerance ? nlohmann::ordered_json(*cfg.tolerance) : nullptr;
    rec.columns = {"property", "module", "cases", "worst_residual", "tolerance", "passed"};
    std::int64_t failures = 0;
    for (std::size_t i = 0; i < props.size(); ++i) {
        const double tol = cfg.tolerance.value_or(props[i].tolerance);
        const bool ok    = results[i].worst <= tol;
        if (!ok) ++failures;
        rec.add_row({std::string(props[i].name), std::string(props[i].module), results[i].cases, results[i].worst, tol,
                     ok});
    }
    rec.passed           = failures == 0;
    rec.meta["failures"] = failures;
    rec.meta["passed"]   = rec.passed;
    return rec;
}

} // namespace concentrate

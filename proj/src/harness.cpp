#include "concentrate/harness.hpp"

#include "concentrate/error.hpp"
#include "concentrate/fidelity.hpp"
#include "concentrate/finite.hpp"
#include "concentrate/log_space.hpp"
#include "concentrate/rate_functions.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace concentrate {

std::size_t worker_count() {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("CONCENTRATE_THREADS")) {
        std::size_t cap      = 0;
        const std::string_view text(env);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
        if (ec == std::errc() && ptr == text.data() + text.size() && cap > 0) return cap;
    }
    return hw;
}

nlohmann::ordered_json spectrum_meta(const SchmidtSpectrum &p) {
    nlohmann::ordered_json meta;
    meta["spectrum"] = std::vector<double>(p.probs().begin(), p.probs().end());
    meta["dim"]      = p.dim();
    return meta;
}

nlohmann::ordered_json base_meta(std::string_view experiment) {
    nlohmann::ordered_json meta;
    meta["experiment"]      = experiment;
    meta["library_version"] = kLibraryVersion;
    meta["numeric"]         = {{"log_base", 2},
                               {"bisection", "bracket collapse to machine precision, max 200 iterations"},
                               {"group_merge_tolerance", kGroupMergeTolerance},
                               {"float_format", "17 significant digits"}};
    return meta;
}

namespace {

void merge(nlohmann::ordered_json &into, const nlohmann::ordered_json &from) {
    for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

Cell opt_cell(const std::optional<double> &v) { return v ? Cell(*v) : Cell(std::monostate{}); }

std::string_view to_string(Regime regime) { return regime == Regime::Direct ? "direct" : "converse"; }

// Least-squares slope of |residual| against log n.
double residual_trend(const std::vector<std::uint32_t> &ns, const std::vector<double> &abs_res) {
    const double k = static_cast<double>(ns.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        mx += std::log(static_cast<double>(ns[i]));
        my += abs_res[i];
    }
    mx /= k;
    my /= k;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double dx = std::log(static_cast<double>(ns[i])) - mx;
        num += dx * (abs_res[i] - my);
        den += dx * dx;
    }
    return den > 0.0 ? num / den : 0.0;
}

} // namespace

ExperimentRecord run_convergence(const ConvergenceConfig &cfg) {
    if (cfg.n_list.empty()) throw Error(ErrorCode::InvalidArgument, "n list is empty");
    for (std::size_t i = 1; i < cfg.n_list.size(); ++i)
        if (cfg.n_list[i] <= cfg.n_list[i - 1]) throw Error(ErrorCode::InvalidArgument, "n list must be strictly increasing");
    const auto &p = cfg.spectrum;
    require_rate_in_regime(p, cfg.rate, cfg.regime);
    const double predicted =
        cfg.regime == Regime::Direct ? inverse_direct(p, cfg.rate) : inverse_converse(p, cfg.rate);

    const auto samples = parallel_map<ExponentSample>(
        cfg.n_list.size(),
        [&](std::size_t i) {
            const std::uint32_t n[] = {cfg.n_list[i]};
            return exponent_sweep(p, cfg.rate, n, cfg.regime, cfg.max_types).front();
        },
        cfg.threads);

    ExperimentRecord rec;
    rec.meta = base_meta("converge");
    merge(rec.meta, spectrum_meta(p));
    rec.meta["regime"]    = to_string(cfg.regime);
    rec.meta["rate"]      = cfg.rate;
    rec.meta["predicted"] = predicted;
    rec.meta["tolerance"] = cfg.tolerance;
    rec.columns = {"n", "rate_actual", "empirical_exponent", "predicted_exponent", "residual", "poly_correction"};

    std::vector<double> abs_res;
    for (const auto &s : samples) {
        const auto emp = cfg.regime == Regime::Direct ? s.failure_exponent : s.success_exponent;
        const double e = emp.value_or(std::numeric_limits<double>::infinity());
        const double residual = e - predicted;
        abs_res.push_back(std::abs(residual));
        const double poly = static_cast<double>(p.dim()) * std::log2(s.n + 1.0) / s.n;
        rec.add_row({static_cast<std::int64_t>(s.n), s.rate_R, e, predicted, residual, poly});
    }
    const double final_residual = abs_res.back();
    const double slope          = residual_trend(cfg.n_list, abs_res);
    rec.meta["final_abs_residual"]  = final_residual;
    rec.meta["residual_trend_slope"] = slope;
    rec.passed          = final_residual <= cfg.tolerance;
    rec.meta["passed"]  = rec.passed;
    return rec;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
    if (steps == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one step");
    if (!(hi >= lo)) throw Error(ErrorCode::InvalidArgument, "grid upper bound below lower bound");
    if (steps == 1) return {lo};
    std::vector<double> g(steps);
    for (std::size_t i = 0; i < steps; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    return g;
}

std::vector<double> default_r_grid(const SchmidtSpectrum &p) {
    double top = 1.5 * std::max(deterministic_exponent(p), uniform_divergence(p));
    if (!(top > 0.0)) top = 1.0;
    return linear_grid(top / 200.0, top, 200);
}

namespace {

void require_grid(const std::vector<double> &g) {
    if (g.empty()) throw Error(ErrorCode::InvalidArgument, "r grid is empty");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0)) throw Error(ErrorCode::NonPositiveExponent, "r grid values must be > 0");
        if (i > 0 && g[i] < g[i - 1]) throw Error(ErrorCode::InvalidArgument, "r grid must be ascending");
    }
}

} // namespace

ExperimentRecord run_sweep(const SweepConfig &cfg) {
    require_grid(cfg.r_grid);
    const auto &p  = cfg.spectrum;
    const auto rp  = r_prime(p);
    struct Row {
        RateCurvePoint e, e_star, e_f, e_star_f;
    };
    const auto rows = parallel_map<Row>(
        cfg.r_grid.size(),
        [&](std::size_t i) {
            const double r = cfg.r_grid[i];
            return Row{direct_yield(p, r), converse_yield(p, r), fidelity_direct_yield(p, r),
                       fidelity_converse_yield(p, r, rp)};
        },
        cfg.threads);

    ExperimentRecord rec;
    rec.meta = base_meta("sweep");
    merge(rec.meta, spectrum_meta(p));
    rec.meta["entropy"]                = shannon_entropy(p);
    rec.meta["deterministic_exponent"] = deterministic_exponent(p);
    rec.meta["uniform_divergence"]     = uniform_divergence(p);
    rec.meta["log2_dim"]               = std::log2(static_cast<double>(p.dim()));
    rec.meta["r_prime"]                = rp.value;
    rec.meta["r_prime_degenerate"]     = rp.degenerate;
    rec.columns = {"r",       "E",        "E_regime",    "s_plus",      "E_star",        "E_star_regime",
                   "s_minus", "E_F",      "E_star_F",    "E_star_F_regime"};
    for (const auto &row : rows) {
        rec.add_row({row.e.r, row.e.yield, std::string(to_string(row.e.regime)), opt_cell(row.e.s_star),
                     row.e_star.yield, std::string(to_string(row.e_star.regime)), opt_cell(row.e_star.s_star),
                     row.e_f.yield, row.e_star_f.yield, std::string(to_string(row.e_star_f.regime))});
    }
    return rec;
}

ExperimentRecord run_nonadditivity(const NonAdditivityConfig &cfg) {
    require_grid(cfg.r_grid);
    const auto reports = parallel_map<NonAdditivityReport>(
        cfg.r_grid.size(), [&](std::size_t i) { return nonadditivity_report(cfg.rho, cfg.sigma, cfg.r_grid[i]); },
        cfg.threads);
    ExperimentRecord rec;
    rec.meta                = base_meta("nonadd");
    rec.meta["rho"]         = spectrum_meta(cfg.rho)["spectrum"];
    rec.meta["sigma"]       = spectrum_meta(cfg.sigma)["spectrum"];
    rec.meta["tolerance"]   = kNonAdditivityTolerance;
    rec.columns = {"r",          "E_rho",        "E_sigma",     "E_joint",      "E_half_rho",
                   "E_half_sigma", "E_rho_rho",  "E_sigma_sigma", "subadditive", "half_identity",
                   "average_bound", "superadditive"};
    for (const auto &x : reports) {
        rec.add_row({x.r, x.e_rho, x.e_sigma, x.e_joint, x.e_half_rho, x.e_half_sigma, x.e_rho_rho, x.e_sigma_sigma,
                     x.subadditive, x.half_identity, x.average_bound, x.superadditive});
        rec.passed = rec.passed && x.subadditive && x.half_identity && x.average_bound && x.superadditive;
    }
    rec.meta["passed"] = rec.passed;
    return rec;
}

ExperimentRecord info_record(const SchmidtSpectrum &p) {
    ExperimentRecord rec;
    rec.meta = base_meta("info");
    merge(rec.meta, spectrum_meta(p));
    rec.columns = {"dim", "entropy", "deterministic_exponent", "uniform_divergence", "deterministic_yield"};
    rec.add_row({static_cast<std::int64_t>(p.dim()), shannon_entropy(p), deterministic_exponent(p),
                 uniform_divergence(p), static_cast<std::int64_t>(deterministic_yield(p))});
    return rec;
}

ExperimentRecord finite_record(const SchmidtSpectrum &p, std::size_t L) {
    const auto plan = solve_plan(p, L);
    ExperimentRecord rec;
    rec.meta = base_meta("finite");
    merge(rec.meta, spectrum_meta(p));
    rec.meta["measurement_coeffs"] = plan.measurement_coeffs;
    rec.columns = {"size", "success_prob", "threshold", "cut_index", "failure_prob", "optimal_probability"};
    rec.add_row({static_cast<std::int64_t>(L), plan.success_prob, plan.threshold,
                 static_cast<std::int64_t>(plan.cut_index), plan.failure_prob(), optimal_probability(p, L)});
    return rec;
}

YieldKind parse_yield_kind(std::string_view text) {
    if (text == "direct") return YieldKind::Direct;
    if (text == "converse") return YieldKind::Converse;
    if (text == "fidelity-direct") return YieldKind::FidelityDirect;
    if (text == "fidelity-converse") return YieldKind::FidelityConverse;
    throw Error(ErrorCode::InvalidArgument, "unknown yield kind '" + std::string(text) + "'");
}

std::string_view to_string(YieldKind kind) noexcept {
    switch (kind) {
    case YieldKind::Direct: return "direct";
    case YieldKind::Converse: return "converse";
    case YieldKind::FidelityDirect: return "fidelity-direct";
    case YieldKind::FidelityConverse: return "fidelity-converse";
    }
    return "unknown";
}

ExperimentRecord yield_record(const SchmidtSpectrum &p, std::span<const double> r_values, YieldKind kind) {
    ExperimentRecord rec;
    rec.meta = base_meta("yield");
    merge(rec.meta, spectrum_meta(p));
    rec.meta["kind"] = to_string(kind);
    std::optional<RPrime> rp;
    if (kind == YieldKind::FidelityConverse) {
        rp                             = r_prime(p);
        rec.meta["r_prime"]            = rp->value;
        rec.meta["r_prime_degenerate"] = rp->degenerate;
    }
    rec.columns = {"r", "yield", "regime", "s_star"};
    for (double r : r_values) {
        RateCurvePoint pt{};
        switch (kind) {
        case YieldKind::Direct: pt = direct_yield(p, r); break;
        case YieldKind::Converse: pt = converse_yield(p, r); break;
        case YieldKind::FidelityDirect: pt = fidelity_direct_yield(p, r); break;
        case YieldKind::FidelityConverse: pt = fidelity_converse_yield(p, r, *rp); break;
        }
        rec.add_row({pt.r, pt.yield, std::string(to_string(pt.regime)), opt_cell(pt.s_star)});
    }
    return rec;
}

ExperimentRecord fidelity_record(const SchmidtSpectrum &p, std::optional<std::size_t> T) {
    ExperimentRecord rec;
    rec.meta = base_meta("fidelity");
    merge(rec.meta, spectrum_meta(p));
    rec.columns = {"T",           "fidelity",        "tradeoff_bound",  "best_sqrt_PL", "tradeoff_holds",
                   "eps",         "stripped",        "stripped_mass", "remainder_max", "remainder_yield",
                   "promised_size", "truncation_checked", "truncation_holds"};
    std::size_t lo = 2, hi = p.dim();
    if (T) {
        if (*T < 2 || *T > p.dim())
            throw Error(ErrorCode::SizeOutOfRange, "T must lie in [2, d]");
        lo = hi = *T;
    }
    for (std::size_t t = lo; t <= hi; ++t) {
        const auto l8 = verify_lemma8(p, t);
        std::vector<Cell> row{static_cast<std::int64_t>(t), l8.fidelity, l8.bound, l8.best_sqrt_pl, l8.holds};
        const double eps = 1.0 - l8.fidelity;
        if (eps < 1.0 / 6.0) {
            const auto l6 = verify_lemma6(p, t);
            row.insert(row.end(), {l6.eps, static_cast<std::int64_t>(l6.stripped), l6.stripped_mass, l6.remainder_max,
                                   static_cast<std::int64_t>(l6.remainder_yield),
                                   static_cast<std::int64_t>(l6.promised_size), true, l6.all_ok()});
            rec.passed = rec.passed && l6.all_ok();
        } else {
            row.insert(row.end(), {eps, std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
                                   std::monostate{}, false, std::monostate{}});
        }
        rec.passed = rec.passed && l8.holds;
        rec.add_row(std::move(row));
    }
    rec.meta["passed"] = rec.passed;
    return rec;
}

ExperimentRecord error_record(std::string_view code, std::string_view message) {
    ExperimentRecord rec;
    rec.meta    = base_meta("error");
    rec.columns = {"error", "message"};
    rec.add_row({std::string(code), std::string(message)});
    rec.passed = false;
    return rec;
}

} // namespace concentrate

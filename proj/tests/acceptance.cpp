// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                       all criteria
//   acceptance --criterion N         one criterion
//   acceptance --criterion N --part saturation|endpoint   (criteria 2 and 3)

#include "concentrate/finite.hpp"
#include "concentrate/fidelity.hpp"
#include "concentrate/harness.hpp"
#include "concentrate/random.hpp"
#include "concentrate/rate_functions.hpp"
#include "concentrate/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

using namespace concentrate;

namespace {

enum class Part { All, Saturation, Endpoint };

struct Verdict {
    bool pass;
    std::string detail;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

const auto rho = new_spectrum(std::vector<double>{0.75, 0.25});

// Formula vs. simplex grid, d in {2, 3}, both regimes.
Verdict criterion1(Part) {
    Rng rng(101);
    double worst = 0.0;
    std::size_t points = 0;
    for (int k = 0; k < 50; ++k) {
        const auto p     = random_spectrum(rng, rng.integer(2, 3));
        const double top = 1.2 * std::max(deterministic_exponent(p), uniform_divergence(p));
        std::vector<double> grid;
        for (int i = 1; i <= 20; ++i) grid.push_back(top * i / 20.0);
        const auto bf = brute_force_curves(p, grid, 10000);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(bf.direct[i] - direct_yield(p, grid[i]).yield));
            worst = std::max(worst, std::abs(bf.converse[i] - converse_yield(p, grid[i]).yield));
            ++points;
        }
    }
    return {worst <= 2e-4, std::to_string(points) + " points, max |formula - grid| " + sci(worst) + " (tol 2e-4)"};
}

constexpr double kEndpointRate = 1e-7;

Verdict endpoint_and_saturation(Part part, bool direct) {
    Rng rng(direct ? 202 : 303);
    double worst_gap = 0.0;
    std::size_t inexact = 0, endpoint_fail = 0;
    for (int k = 0; k < 50; ++k) {
        const auto p   = random_spectrum(rng, rng.integer(2, 8));
        const double h = shannon_entropy(p);
        if (direct) {
            const double top = -std::log2(p.largest());
            for (double r : {top, top * (1 + 1e-9), 1.5 * top, 10.0})
                if (direct_yield(p, r).yield != top) ++inexact;
        } else {
            const double c   = uniform_divergence(p);
            const double cap = std::log2(static_cast<double>(p.dim()));
            for (double r : {c, c * (1 + 1e-9), 1.5 * c, 10.0})
                if (converse_yield(p, r).yield != cap) ++inexact;
        }
        const double e   = direct ? direct_yield(p, kEndpointRate).yield : converse_yield(p, kEndpointRate).yield;
        const double gap = std::abs(e - h);
        worst_gap        = std::max(worst_gap, gap);
        if (gap > 1e-4) ++endpoint_fail;
    }
    const bool sat_ok = inexact == 0;
    const bool end_ok = endpoint_fail == 0;
    const std::string sat = "saturation " + std::string(sat_ok ? "exact" : "inexact") + " (" +
                            std::to_string(inexact) + " misses)";
    const std::string end = "endpoint max |E(1e-7) - H| " + sci(worst_gap) + ", " + std::to_string(endpoint_fail) +
                            "/50 above 1e-4";
    switch (part) {
    case Part::Saturation: return {sat_ok, sat};
    case Part::Endpoint: return {end_ok, end};
    default: return {sat_ok && end_ok, sat + "; " + end};
    }
}

Verdict convergence(double rate, Regime regime, bool need_trend) {
    ConvergenceConfig cfg{rho, rate, {100, 200, 500, 1000, 2000}, regime};
    const auto rec     = run_convergence(cfg);
    const double final = rec.meta["final_abs_residual"].get<double>();
    const double slope = rec.meta["residual_trend_slope"].get<double>();
    const bool ok      = rec.passed && (!need_trend || slope < 0.0);
    return {ok, "|residual| at n=2000 " + sci(final) + " (tol 0.02), trend slope " + sci(slope)};
}

// Closed form vs. threshold plan.
Verdict criterion6(Part) {
    Rng rng(606);
    double worst = 0.0;
    std::size_t cases = 0;
    for (int k = 0; k < 500; ++k) {
        const auto p = random_spectrum(rng, rng.integer(1, 16));
        for (std::size_t L = 1; L <= p.dim(); ++L) {
            const double P  = optimal_probability(p, L);
            const auto plan = solve_plan(p, L);
            worst = std::max({worst, std::abs(P - plan.success_prob),
                              std::abs(P - plan.threshold * static_cast<double>(L))});
            ++cases;
        }
    }
    return {worst <= 1e-12, std::to_string(cases) + " (spectrum, L) pairs, max residual " + sci(worst)};
}

// Counting and probability sandwiches over every type.
Verdict criterion7(Part) {
    Rng rng(707);
    constexpr double slack = 1e-9;
    std::size_t violations = 0, checks = 0;
    for (std::size_t d = 1; d <= 3; ++d)
        for (std::uint32_t n = 1; n <= 40; ++n) {
            const double poly = static_cast<double>(d) * std::log2(n + 1.0);
            ++checks;
            if (std::log2(count_types(n, d)) > poly + slack) ++violations;
            for (const auto &t : enumerate_types(n, d)) {
                const auto e    = t.empirical();
                const double nh = n * shannon_entropy(e);
                const double sz = log_type_class_size(t);
                checks += 2;
                if (sz > nh + slack) ++violations;
                if (sz < nh - poly - slack) ++violations;
            }
            for (int j = 0; j < 20; ++j) {
                const auto q = random_spectrum(rng, d);
                for (const auto &t : enumerate_types(n, d)) {
                    const auto e    = t.empirical();
                    const double nh = n * shannon_entropy(e);
                    const double nd = n * relative_entropy(e, q.probs());
                    const double lp = log_type_class_prob(t, q);
                    checks += 3;
                    if (std::abs(log_sequence_prob(t, q) + nh + nd) > slack * std::max(1.0, nh + nd)) ++violations;
                    if (lp > -nd + slack) ++violations;
                    if (lp < -nd - poly - slack) ++violations;
                }
            }
        }
    return {violations == 0, std::to_string(checks) + " bound checks, " + std::to_string(violations) + " violations"};
}

Verdict criterion8(Part) {
    Rng rng(808);
    double worst_half = 0.0;
    std::size_t failures = 0;
    for (int k = 0; k < 100; ++k) {
        const auto a   = random_spectrum(rng, rng.integer(2, 5));
        const auto b   = random_spectrum(rng, rng.integer(2, 5));
        const double r = (0.01 + 1.99 * rng.uniform()) * std::max(deterministic_exponent(a), deterministic_exponent(b));
        const auto rep = nonadditivity_report(a, b, r);
        worst_half     = std::max(worst_half, rep.half_identity_residual);
        if (!rep.half_identity || !rep.superadditive || !rep.average_bound) ++failures;
    }
    const auto strict   = nonadditivity_report(rho, rho, 0.2);
    const double margin = strict.e_joint - 2.0 * strict.e_rho;
    const bool ok       = failures == 0 && worst_half <= 1e-9 && margin > 0.0;
    return {ok, std::to_string(failures) + "/100 triples failing, half-identity residual " + sci(worst_half) +
                    ", strict margin at r=0.2 " + sci(margin)};
}

Verdict criterion9(Part) {
    Rng rng(909);
    std::size_t spectra = 0, trunc_runs = 0, trunc_fail = 0;
    while (spectra < 100) {
        const auto p = near_uniform_spectrum(rng, rng.integer(8, 64), 0.5 * rng.uniform());
        bool used    = false;
        for (std::size_t T = 7; T <= p.dim(); ++T) {
            if (1.0 - aligned_fidelity(p, T) >= 1.0 / 6.0) continue;
            used = true;
            ++trunc_runs;
            if (!verify_lemma6(p, T).all_ok()) ++trunc_fail;
        }
        if (used) ++spectra;
    }
    std::size_t trade_runs = 0, trade_fail = 0;
    for (int k = 0; k < 100; ++k) {
        const auto p = random_spectrum(rng, rng.integer(2, 40));
        for (std::size_t T = 2; T <= p.dim(); ++T) {
            ++trade_runs;
            if (!verify_lemma8(p, T).holds) ++trade_fail;
        }
    }
    return {trunc_fail == 0 && trade_fail == 0,
            "truncation " + std::to_string(trunc_fail) + "/" + std::to_string(trunc_runs) + " failing, trade-off " +
                std::to_string(trade_fail) + "/" + std::to_string(trade_runs) + " failing"};
}

Verdict criterion10(Part) {
    Rng rng(1010);
    double worst_eq = 0.0, worst_slope = 0.0, worst_sep = 0.0;
    constexpr double h = 1e-6;
    for (int k = 0; k < 30; ++k) {
        const auto p  = k == 0 ? rho : random_spectrum(rng, rng.integer(2, 8));
        const auto rp = r_prime(p);
        if (rp.degenerate) continue;
        for (int i = 1; i <= 20; ++i) {
            const double r = rp.value * i / 20.0;
            worst_eq = std::max(worst_eq, std::abs(fidelity_converse_yield(p, r, rp).yield - converse_yield(p, r).yield));
        }
        for (int i = 0; i < 20; ++i) {
            const double r = rp.value + 1e-4 + 0.1 * i;
            const double s =
                (fidelity_converse_yield(p, r + h, rp).yield - fidelity_converse_yield(p, r - h, rp).yield) / (2 * h);
            worst_slope = std::max(worst_slope, std::abs(s - 1.0));
        }
    }
    const auto sep = new_spectrum(std::vector<double>{1.0});
    for (double r : {1e-6, 0.01, 0.3, 1.0, 5.0})
        worst_sep = std::max(worst_sep, std::abs(fidelity_converse_yield(sep, r).yield - r));
    return {worst_eq <= 1e-8 && worst_slope <= 1e-6 && worst_sep <= 1e-12,
            "below r' " + sci(worst_eq) + ", slope " + sci(worst_slope) + ", separable " + sci(worst_sep)};
}

std::string slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Two CLI invocations per command must write identical bytes.
Verdict criterion11(Part) {
    const std::filesystem::path dir = std::filesystem::path(CONCENTRATE_TEST_TMP) / "determinism";
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"check", "check --seed 42"},
        {"check_json", "check --seed 42 --format json"},
        {"converge", "converge --spectrum 0.75,0.25 --rate 0.6"},
        {"converge_json", "converge --spectrum 0.75,0.25 --rate 0.95 --format json"},
    };
    std::size_t mismatches = 0;
    for (const auto &[name, args] : commands) {
        std::string contents[2];
        for (int run = 0; run < 2; ++run) {
            const auto file = dir / (name + "_" + std::to_string(run) + ".out");
            std::filesystem::remove(file);
            const std::string cmd = std::string("\"") + CONCENTRATE_CLI + "\" " + args + " --out \"" + file.string() + "\"";
            if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + args};
            contents[run] = slurp(file);
        }
        if (contents[0].empty() || contents[0] != contents[1]) ++mismatches;
    }
    return {mismatches == 0, std::to_string(commands.size()) + " commands run twice, " + std::to_string(mismatches) +
                                 " differing outputs"};
}

struct Criterion {
    int id;
    double limit_seconds; // <= 0: no limit
    std::function<Verdict(Part)> run;
};

const std::vector<Criterion> &criteria() {
    static const std::vector<Criterion> all = {
        {1, 60.0, criterion1},
        {2, 5.0, [](Part p) { return endpoint_and_saturation(p, true); }},
        {3, 5.0, [](Part p) { return endpoint_and_saturation(p, false); }},
        {4, 30.0, [](Part) { return convergence(0.6, Regime::Direct, true); }},
        {5, 30.0, [](Part) { return convergence(0.95, Regime::Converse, false); }},
        {6, 10.0, criterion6},
        {7, 20.0, criterion7},
        {8, 10.0, criterion8},
        {9, 20.0, criterion9},
        {10, 5.0, criterion10},
        {11, 0.0, criterion11},
    };
    return all;
}

bool run_one(const Criterion &c, Part part) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = c.run(part);
    } catch (const std::exception &e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds <= 0.0 || secs <= c.limit_seconds;
    const bool pass    = v.pass && in_time;
    std::ostringstream line;
    line << "criterion " << c.id;
    if (part == Part::Saturation) line << " [saturation]";
    if (part == Part::Endpoint) line << " [endpoint]";
    line << ": " << (pass ? "PASS" : "FAIL") << "  " << v.detail << "; " << sci(secs) << " s";
    if (c.limit_seconds > 0.0) line << " (limit " << c.limit_seconds << " s)";
    std::cout << line.str() << std::endl;
    return pass;
}

} // namespace

int main(int argc, char **argv) {
    int only  = 0;
    Part part = Part::All;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (arg == "--part" && i + 1 < argc) {
            const std::string v = argv[++i];
            if (v == "saturation") part = Part::Saturation;
            else if (v == "endpoint") part = Part::Endpoint;
            else {
                std::cerr << "unknown part '" << v << "'\n";
                return 2;
            }
        } else {
            std::cerr << "usage: acceptance [--criterion N [--part saturation|endpoint]]\n";
            return 2;
        }
    }
    bool all_pass = true, found = false;
    for (const auto &c : criteria()) {
        if (only != 0 && c.id != only) continue;
        found = true;
        all_pass &= run_one(c, part);
    }
    if (!found) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}

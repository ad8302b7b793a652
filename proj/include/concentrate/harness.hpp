#pragma once

#include "concentrate/iid_exact.hpp"
#include "concentrate/record.hpp"
#include "concentrate/spectrum.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

namespace concentrate {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Worker cap from CONCENTRATE_THREADS; hardware concurrency when unset.
std::size_t worker_count();

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers. Results are
/// assembled by index, so the output never depends on scheduling. The
/// exception of the lowest failing index is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn &&fn, std::size_t threads = worker_count()) {
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < count; i += stride) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    }
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

/// Metadata shared by every record: spectrum, version, numeric settings.
nlohmann::ordered_json spectrum_meta(const SchmidtSpectrum &p);
nlohmann::ordered_json base_meta(std::string_view experiment);

// ---------------------------------------------------------------------------
// Experiments

inline constexpr double kConvergenceTolerance = 0.02;

struct ConvergenceConfig {
    SchmidtSpectrum spectrum;
    double rate;
    std::vector<std::uint32_t> n_list;
    Regime regime                 = Regime::Direct;
    double tolerance              = kConvergenceTolerance;
    double max_types              = kDefaultMaxTypes;
    std::size_t threads           = worker_count();
};

/// Finite-n exponents against the asymptotic prediction. `passed` reflects the
/// largest n being within tolerance.
ExperimentRecord run_convergence(const ConvergenceConfig &cfg);

struct SweepConfig {
    SchmidtSpectrum spectrum;
    std::vector<double> r_grid;
    std::size_t threads = worker_count();
};

/// E, E*, E_F and E*_F on an exponent grid, with regimes and optimizing tilts.
ExperimentRecord run_sweep(const SweepConfig &cfg);

/// Evenly spaced grid of `steps` points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t steps);

/// Default sweep grid: 200 points up to 1.5 max(-log2 p_1, c).
std::vector<double> default_r_grid(const SchmidtSpectrum &p);

struct NonAdditivityConfig {
    SchmidtSpectrum rho;
    SchmidtSpectrum sigma;
    std::vector<double> r_grid;
    std::size_t threads = worker_count();
};
ExperimentRecord run_nonadditivity(const NonAdditivityConfig &cfg);

struct CheckSuiteConfig {
    std::uint64_t seed = 20010101;
    std::optional<double> tolerance; // replaces every property tolerance when set
    std::size_t threads = worker_count();
};

/// Every module invariant against seeded random spectra; one row per property.
ExperimentRecord run_check_suite(const CheckSuiteConfig &cfg);

// ---------------------------------------------------------------------------
// Single evaluations, one record each.

ExperimentRecord info_record(const SchmidtSpectrum &p);
ExperimentRecord finite_record(const SchmidtSpectrum &p, std::size_t L);

enum class YieldKind { Direct, Converse, FidelityDirect, FidelityConverse };
YieldKind parse_yield_kind(std::string_view text);
std::string_view to_string(YieldKind kind) noexcept;

ExperimentRecord yield_record(const SchmidtSpectrum &p, std::span<const double> r_values, YieldKind kind);

/// Trade-off and truncation checks for one T, or every feasible T when absent.
ExperimentRecord fidelity_record(const SchmidtSpectrum &p, std::optional<std::size_t> T);

/// Record describing a domain error (code and message).
ExperimentRecord error_record(std::string_view code, std::string_view message);

} // namespace concentrate

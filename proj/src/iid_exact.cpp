#include "concentrate/iid_exact.hpp"

#include "concentrate/error.hpp"
#include "concentrate/log_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace concentrate {

namespace {

// Equal coefficients form one class; sequences are counted per class-count
// vector, so degenerate type classes never need to be merged numerically.
struct ValueClass {
    double log_value;
    double log_size; // log2 of how many coefficients share the value
};

std::vector<ValueClass> value_classes(const SchmidtSpectrum &p) {
    std::vector<ValueClass> classes;
    std::size_t i = 0;
    while (i < p.dim()) {
        std::size_t j = i;
        while (j < p.dim() && p[j] == p[i]) ++j;
        classes.push_back({std::log2(p[i]), std::log2(static_cast<double>(j - i))});
        i = j;
    }
    return classes;
}

double log2_binomial(std::uint32_t n, std::uint32_t k) {
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::numbers::ln2;
}

} // namespace

GroupedSpectrum grouped_spectrum(const SchmidtSpectrum &p, std::uint32_t n, double max_types) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "grouped_spectrum needs n >= 1");
    const auto classes = value_classes(p);
    GroupedSpectrum out;
    out.n             = n;
    out.total_log_dim = n * std::log2(static_cast<double>(p.dim()));

    std::vector<GroupedSpectrum::Group> raw;
    if (classes.size() == 1) {
        raw.push_back({n * classes[0].log_value, n * classes[0].log_size});
    } else if (classes.size() == 2) {
        // Two distinct values: O(n) walk over the count of the smaller one.
        const auto &a = classes[0];
        const auto &b = classes[1];
        raw.reserve(n + 1);
        for (std::uint32_t k = 0; k <= n; ++k) {
            const double lp = (n - k) * a.log_value + k * b.log_value;
            const double lm = log2_binomial(n, k) + (n - k) * a.log_size + k * b.log_size;
            raw.push_back({lp, std::max(0.0, lm)});
        }
    } else {
        for (const auto &t : enumerate_types(n, classes.size(), max_types)) {
            double lp = 0.0;
            double lm = log_type_class_size(t);
            for (std::size_t c = 0; c < classes.size(); ++c) {
                lp += t.counts[c] * classes[c].log_value;
                lm += t.counts[c] * classes[c].log_size;
            }
            raw.push_back({lp, lm});
        }
    }

    std::stable_sort(raw.begin(), raw.end(), [](const auto &x, const auto &y) { return x.log_prob > y.log_prob; });
    for (const auto &g : raw) {
        if (!out.groups.empty() && out.groups.back().log_prob - g.log_prob <= kGroupMergeTolerance)
            out.groups.back().log_multiplicity = logspace::add(out.groups.back().log_multiplicity, g.log_multiplicity);
        else
            out.groups.push_back(g);
    }
    return out;
}

ExactConcentration exact_success_prob(const GroupedSpectrum &spectrum, double log2_L) {
    if (!(log2_L >= 0.0) || log2_L > spectrum.total_log_dim + 1e-9)
        throw Error(ErrorCode::SizeOutOfRange, "log2 L = " + std::to_string(log2_L) + " outside [0, " +
                                                   std::to_string(spectrum.total_log_dim) + "]");
    if (log2_L < 52.0) log2_L = std::log2(std::max(1.0, std::round(std::exp2(log2_L))));
    log2_L = std::min(log2_L, spectrum.total_log_dim);

    const auto &g       = spectrum.groups;
    const std::size_t m = g.size();
    // suffix[k]: log2 of the probability mass of groups k..m-1.
    std::vector<double> suffix(m + 1, logspace::neg_inf);
    for (std::size_t k = m; k-- > 0;) suffix[k] = logspace::add(suffix[k + 1], g[k].log_prob + g[k].log_multiplicity);

    double above = logspace::neg_inf; // log2 count of sequences above threshold
    double t     = 0.0;
    std::size_t k = 0;
    for (; k < m; ++k) {
        const double room = logspace::sub(log2_L, above);
        t                 = room == logspace::neg_inf ? logspace::neg_inf : suffix[k] - room;
        if (room != logspace::neg_inf && t >= g[k].log_prob) break;
        above = logspace::add(above, g[k].log_multiplicity);
    }
    if (k == m) t = g.back().log_prob;
    if (k > 0) t = std::min(t, g[k - 1].log_prob);

    ExactConcentration out;
    out.log2_threshold = t;
    out.log2_size      = log2_L;
    out.log2_success   = std::min(0.0, t + log2_L);
    if (k == 0) {
        out.log2_failure = logspace::neg_inf;
    } else {
        std::vector<double> excess(k);
        for (std::size_t j = 0; j < k; ++j)
            excess[j] = g[j].log_multiplicity + g[j].log_prob + logspace::one_minus(t - g[j].log_prob);
        out.log2_failure = logspace::sum_exp(excess);
    }
    return out;
}

ExactConcentration exact_success_prob(const SchmidtSpectrum &p, std::uint32_t n, double log2_L, double max_types) {
    return exact_success_prob(grouped_spectrum(p, n, max_types), log2_L);
}

double target_log_size(double R, std::uint32_t n, std::size_t d) {
    const double max_log = n * std::log2(static_cast<double>(d));
    const double x       = n * R;
    if (x <= 0.0) return 0.0;
    if (x >= max_log) return max_log;
    if (x < 53.0) return std::min(max_log, std::log2(std::ceil(std::exp2(x))));
    return x;
}

void require_rate_in_regime(const SchmidtSpectrum &p, double R, Regime regime) {
    const double H = shannon_entropy(p);
    if (regime == Regime::Direct) {
        const double lo = deterministic_exponent(p);
        if (!(R > lo && R < H))
            throw Error(ErrorCode::RateOutOfRange, "direct regime needs -log2 p1 = " + std::to_string(lo) +
                                                       " < R < H(p) = " + std::to_string(H));
    } else {
        const double hi = std::log2(static_cast<double>(p.dim()));
        if (!(R > H && R < hi))
            throw Error(ErrorCode::RateOutOfRange, "converse regime needs H(p) = " + std::to_string(H) +
                                                       " < R < log2 d = " + std::to_string(hi));
    }
}

std::vector<ExponentSample> exponent_sweep(const SchmidtSpectrum &p, double R, std::span<const std::uint32_t> n_list,
                                           Regime regime, double max_types) {
    require_rate_in_regime(p, R, regime);
    std::vector<ExponentSample> out;
    out.reserve(n_list.size());
    for (auto n : n_list) {
        const double log2_L = target_log_size(R, n, p.dim());
        const auto exact    = exact_success_prob(p, n, log2_L, max_types);
        ExponentSample s{n, exact.log2_size / n, std::nullopt, std::nullopt};
        if (exact.log2_failure != logspace::neg_inf) s.failure_exponent = -exact.log2_failure / n;
        if (exact.log2_success != logspace::neg_inf) s.success_exponent = -exact.log2_success / n;
        out.push_back(s);
    }
    return out;
}

} // namespace concentrate

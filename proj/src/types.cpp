#include "concentrate/types.hpp"

#include "concentrate/error.hpp"
#include "concentrate/log_space.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace concentrate {

std::vector<double> TypeComposition::empirical() const {
    std::vector<double> q(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) q[i] = static_cast<double>(counts[i]) / n;
    return q;
}

double count_types(std::uint32_t n, std::size_t d) {
    if (d == 0) return 0.0;
    const double k = static_cast<double>(d - 1);
    return std::round(std::exp(std::lgamma(n + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n + 1.0)));
}

TypeRange::iterator TypeRange::begin() const {
    TypeComposition first;
    first.n = n_;
    first.counts.assign(d_, 0);
    if (d_ == 0) return end();
    first.counts[0] = n_;
    return iterator(std::move(first));
}

TypeRange::iterator &TypeRange::iterator::operator++() {
    auto &c            = current_.counts;
    const std::size_t d = c.size();
    // Last position before the final slot that still has mass to move right.
    std::size_t j = d;
    for (std::size_t i = d - 1; i-- > 0;)
        if (c[i] > 0) {
            j = i;
            break;
        }
    if (j == d) {
        done_ = true;
        return *this;
    }
    --c[j];
    std::uint32_t tail = 0;
    for (std::size_t i = j + 1; i < d; ++i) {
        tail += c[i];
        c[i] = 0;
    }
    c[j + 1] = tail + 1;
    return *this;
}

TypeRange enumerate_types(std::uint32_t n, std::size_t d, double max_types) {
    if (n < 1 || d < 1) throw Error(ErrorCode::InvalidArgument, "enumerate_types needs n >= 1 and d >= 1");
    const double count = count_types(n, d);
    if (count > max_types)
        throw Error(ErrorCode::TooManyTypes, "type count " + std::to_string(count) + " exceeds guard " +
                                                 std::to_string(max_types));
    return TypeRange(n, d);
}

double log_type_class_size(const TypeComposition &t) {
    double acc = std::lgamma(t.n + 1.0);
    for (auto c : t.counts) acc -= std::lgamma(c + 1.0);
    return std::max(0.0, acc / std::numbers::ln2);
}

double log_sequence_prob(const TypeComposition &t, std::span<const double> q) {
    if (q.size() != t.dim())
        throw Error(ErrorCode::DimensionMismatch, "type has " + std::to_string(t.dim()) + " symbols, q has " +
                                                      std::to_string(q.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (t.counts[i] == 0) continue;
        if (q[i] <= 0.0) return logspace::neg_inf;
        acc += t.counts[i] * std::log2(q[i]);
    }
    return acc;
}

double log_type_class_prob(const TypeComposition &t, std::span<const double> q) {
    const double seq = log_sequence_prob(t, q);
    if (seq == logspace::neg_inf) return seq;
    return log_type_class_size(t) + seq;
}

} // namespace concentrate

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

// Base-2 log-space arithmetic. Every n-copy probability is carried as log2.
namespace concentrate::logspace {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// log2(2^a + 2^b)
inline double add(double a, double b) noexcept {
    if (a < b) std::swap(a, b);
    if (b == neg_inf) return a;
    return a + std::log1p(std::exp2(b - a)) / std::numbers::ln2;
}

/// log2(2^a - 2^b), requires a >= b; returns -inf when equal.
inline double sub(double a, double b) noexcept {
    if (b == neg_inf) return a;
    if (b >= a) return neg_inf;
    return a + std::log1p(-std::exp2(b - a)) / std::numbers::ln2;
}

/// log2(sum_i 2^{x_i}) with the max factored out.
inline double sum_exp(std::span<const double> xs) noexcept {
    double m = neg_inf;
    for (double x : xs) m = std::max(m, x);
    if (m == neg_inf) return neg_inf;
    if (std::isinf(m)) return m;
    double acc = 0.0;
    for (double x : xs) acc += std::exp2(x - m);
    return m + std::log2(acc);
}

/// log2(1 - 2^x) for x <= 0.
inline double one_minus(double x) noexcept {
    if (x >= 0.0) return neg_inf;
    return std::log1p(-std::exp2(x)) / std::numbers::ln2;
}

} // namespace concentrate::logspace

#pragma once

#include "concentrate/spectrum.hpp"

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

namespace concentrate {

/// A type with denominator n over d symbols: counts summing to n.
struct TypeComposition {
    std::vector<std::uint32_t> counts;
    std::uint32_t n = 0;

    std::size_t dim() const noexcept { return counts.size(); }
    /// Empirical distribution counts_i / n.
    std::vector<double> empirical() const;

    friend bool operator==(const TypeComposition &, const TypeComposition &) = default;
};

/// Default resource guard on the number of enumerated types.
inline constexpr double kDefaultMaxTypes = 1e8;

/// Number of types C(n+d-1, d-1), as a double (may exceed integer range).
double count_types(std::uint32_t n, std::size_t d);

/// Streams every composition of n into d ordered parts exactly once, in
/// descending lexicographic order starting at (n, 0, ..., 0).
class TypeRange {
  public:
    class iterator {
      public:
        using value_type        = TypeComposition;
        using difference_type   = std::ptrdiff_t;
        using iterator_category = std::input_iterator_tag;

        iterator() = default;
        const TypeComposition &operator*() const noexcept { return current_; }
        const TypeComposition *operator->() const noexcept { return &current_; }
        iterator &operator++();
        void operator++(int) { ++*this; }
        friend bool operator==(const iterator &a, const iterator &b) noexcept { return a.done_ == b.done_; }

      private:
        friend class TypeRange;
        explicit iterator(TypeComposition first) : current_(std::move(first)), done_(false) {}
        TypeComposition current_;
        bool done_ = true;
    };

    TypeRange(std::uint32_t n, std::size_t d) : n_(n), d_(d) {}
    iterator begin() const;
    iterator end() const { return iterator(); }

  private:
    std::uint32_t n_;
    std::size_t d_;
};

/// Validated stream of types; throws TooManyTypes when the count exceeds `max_types`.
TypeRange enumerate_types(std::uint32_t n, std::size_t d, double max_types = kDefaultMaxTypes);

/// log2 of the multinomial n! / prod counts_i!, via log-gamma.
double log_type_class_size(const TypeComposition &t);

/// log2 of the probability of one sequence of type t under q: sum counts_i log2 q_i.
double log_sequence_prob(const TypeComposition &t, std::span<const double> q);
inline double log_sequence_prob(const TypeComposition &t, const SchmidtSpectrum &q) {
    return log_sequence_prob(t, q.probs());
}

/// log2 of the probability of the whole type class under q^n.
double log_type_class_prob(const TypeComposition &t, std::span<const double> q);
inline double log_type_class_prob(const TypeComposition &t, const SchmidtSpectrum &q) {
    return log_type_class_prob(t, q.probs());
}

/// Asymptotic exponent of 2^{-na} + 2^{-nb}: min(a, b).
constexpr double exponent_of_log_sum(double a, double b) noexcept { return a < b ? a : b; }

} // namespace concentrate

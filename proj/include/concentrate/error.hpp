#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace concentrate {

enum class ErrorCode {
    EmptySpectrum,
    NotNormalized,
    NegativeEntry,
    DimensionMismatch,
    SizeOutOfRange,
    TooManyTypes,
    RateOutOfRange,
    NonPositiveExponent,
    DimensionTooLarge,
    DegenerateSpectrum,
    BracketExceeded,
    SizeOrder,
    EpsTooLarge,
    TTooSmall,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every numeric operation; carries a stable code for
/// machine-readable reporting.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace concentrate

#include "concentrate/error.hpp"

namespace concentrate {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SizeOutOfRange: return "SizeOutOfRange";
    case ErrorCode::TooManyTypes: return "TooManyTypes";
    case ErrorCode::RateOutOfRange: return "RateOutOfRange";
    case ErrorCode::NonPositiveExponent: return "NonPositiveExponent";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::BracketExceeded: return "BracketExceeded";
    case ErrorCode::SizeOrder: return "SizeOrder";
    case ErrorCode::EpsTooLarge: return "EpsTooLarge";
    case ErrorCode::TTooSmall: return "TTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace concentrate

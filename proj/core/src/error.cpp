#include "gaitsym/error.hpp"

namespace gaitsym {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CutoffAboveNyquist: return "CutoffAboveNyquist";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::InputTooShort: return "InputTooShort";
    case ErrorCode::NoPeriodFound: return "NoPeriodFound";
    case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorCode::SeriesTooShortForPeriod: return "SeriesTooShortForPeriod";
    case ErrorCode::EmptyStride: return "EmptyStride";
    case ErrorCode::TooFewPeaks: return "TooFewPeaks";
    case ErrorCode::NoStepBoundary: return "NoStepBoundary";
    case ErrorCode::BothZero: return "BothZero";
    case ErrorCode::NoStridesDetected: return "NoStridesDetected";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::DurationTooShort: return "DurationTooShort";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonUniformSampling: return "NonUniformSampling";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gaitsym

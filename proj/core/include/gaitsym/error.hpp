#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaitsym {

enum class ErrorCode {
  InvalidArgument,
  // signal_core
  CutoffAboveNyquist,
  SeriesTooShort,
  InputTooShort,
  NoPeriodFound,
  // decomposition
  DegenerateNeighborhood,
  SeriesTooShortForPeriod,
  EmptyStride,
  // gait
  TooFewPeaks,
  NoStepBoundary,
  BothZero,
  NoStridesDetected,
  // stats
  TooFewValues,
  LengthMismatch,
  // clustering
  RankDeficient,
  DimensionMismatch,
  TooFewPoints,
  AlphaOutOfRange,
  // synth
  DurationTooShort,
  UnknownPreset,
  // io
  MalformedHeader,
  MalformedRow,
  NonUniformSampling,
  NonFiniteValue,
  MalformedDocument,
  UnsupportedVersion,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gaitsym

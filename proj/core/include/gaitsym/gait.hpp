#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaitsym/decomposition.hpp"
#include "gaitsym/signal.hpp"

namespace gaitsym {

/// Samples per normalized stride.
inline constexpr std::size_t kStrideLength = 200;

struct StrideSegment {
  std::size_t index = 0;
  std::size_t start_idx = 0;  // source-series sample of the stride-start peak
  std::size_t end_idx = 0;    // source-series sample of the next peak
  std::vector<double> normalized;
  double t1_pct = 0.0;
  double t2_pct = 0.0;
  double weight = 0.0;
};

struct SymmetryRecord {
  std::size_t stride_index = 0;
  double sa_pct = 0.0;
  std::string trial_id;
  std::optional<std::string> class_label;
};

struct StepSplit {
  double t1_pct = 0.0;
  double t2_pct = 0.0;
  double boundary = 0.0;  // fractional index into the normalized stride
};

struct AnalysisConfig {
  std::string trial_id = "trial";
  std::optional<std::string> class_label;
  FilterSpec filter;
  StlConfig stl;
  bool swap_feet = false;
};

struct TrialAnalysis {
  std::vector<SymmetryRecord> records;
  std::vector<StrideSegment> segments;
  DecompositionResult decomposition;
  double period_s = 0.0;
  std::vector<std::size_t> peaks;
};

/// One segment per consecutive peak pair, each resampled to `length` samples.
std::vector<StrideSegment> segment_strides(std::span<const double> seasonal, std::span<const std::size_t> peaks,
                                           std::size_t length = kStrideLength);

/// Left/right step split from the steepest interior inflection of the stride shape.
StepSplit split_steps(std::span<const double> normalized);
StepSplit split_steps(const StrideSegment& segment);

inline constexpr double kStepWindowLow = 0.2;
inline constexpr double kStepWindowHigh = 0.8;

/// Symmetry Angle in percent; 0 is symmetric, negative values lean left.
double symmetry_angle(double x_left, double x_right);

/// Resamples every peak-to-peak stride to `samples_per_stride` intervals and
/// concatenates them; the result has strides * samples_per_stride + 1 samples.
std::vector<double> normalize_strides(std::span<const double> samples, std::span<const std::size_t> peaks,
                                      std::size_t samples_per_stride);

TrialAnalysis analyze_trial(const TimeSeries& series, const AnalysisConfig& config = {});

}  // namespace gaitsym

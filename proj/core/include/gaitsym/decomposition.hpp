#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gaitsym/signal.hpp"

namespace gaitsym {

/// Additive decomposition input = trend + seasonal + residual, plus the
/// per-stride amplitudes of the common seasonal template.
struct DecompositionResult {
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> residual;
  std::size_t period_samples = 0;
  std::vector<double> stride_weights;
  double rmse = 0.0;           // RMS of `residual`
  double weighted_rmse = 0.0;  // RMS after the weighted-template fit
};

struct StlConfig {
  int seasonal_span_cycles = 7;
  int trend_window = 0;  // 0 selects the smallest odd >= 1.5 * period
  int inner_iterations = 2;
  int robustness_iterations = 1;
};

/// [start, end) sample range of one stride.
using StrideBounds = std::pair<std::size_t, std::size_t>;

struct StrideWeights {
  std::vector<double> weights;
  double rmse = 0.0;
};

DecompositionResult stl_decompose(const TimeSeries& series, std::size_t period_samples, const StlConfig& config = {});

/// Closed-form scalar least-squares amplitude of `stride_template` on every stride.
StrideWeights fit_stride_weights(std::span<const double> detrended, std::span<const StrideBounds> bounds,
                                 std::span<const double> stride_template);

/// Average seasonal cycle over all full cycles (one value per cycle position).
std::vector<double> seasonal_template(std::span<const double> seasonal, std::size_t period_samples);

double root_mean_square(std::span<const double> values);

}  // namespace gaitsym

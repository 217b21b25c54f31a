#include "gaitsym/gait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaitsym/error.hpp"

namespace gaitsym {

std::vector<StrideSegment> segment_strides(std::span<const double> seasonal, std::span<const std::size_t> peaks,
                                           std::size_t length) {
  if (peaks.size() < 2) throw Error(ErrorCode::TooFewPeaks, std::to_string(peaks.size()) + " peak(s), need 2");
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    if (peaks[i] <= peaks[i - 1]) throw Error(ErrorCode::InvalidArgument, "peaks must be strictly increasing");
  }
  if (peaks.back() >= seasonal.size()) throw Error(ErrorCode::InvalidArgument, "peak index beyond the series");

  std::vector<StrideSegment> segments;
  segments.reserve(peaks.size() - 1);
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
    StrideSegment seg;
    seg.index = i;
    seg.start_idx = peaks[i];
    seg.end_idx = peaks[i + 1];
    seg.normalized = resample_linear(seasonal.subspan(peaks[i], peaks[i + 1] - peaks[i] + 1), length);
    segments.push_back(std::move(seg));
  }
  return segments;
}

StepSplit split_steps(std::span<const double> normalized) {
  const std::size_t n = normalized.size();
  if (n < 5) throw Error(ErrorCode::InputTooShort, "stride shape needs at least 5 samples");

  // Two 5-point passes form a 9-point triangular kernel.
  const auto smooth = moving_average(moving_average(normalized, 5), 5);
  const auto candidates = inflection_points(smooth);
  const double last = static_cast<double>(n - 1);
  const double lo = kStepWindowLow * last;
  const double hi = kStepWindowHigh * last;

  std::size_t best = 0;
  double best_slope = -1.0;
  for (auto c : candidates) {
    const auto pos = static_cast<double>(c);
    if (pos < lo || pos > hi || c + 1 >= n) continue;
    const double slope = std::abs(smooth[c + 1] - smooth[c]);
    if (slope > best_slope) {
      best_slope = slope;
      best = c;
    }
  }
  if (best_slope < 0.0) throw Error(ErrorCode::NoStepBoundary, "no inflection inside the 20-80% window");

  // Sub-sample position of the curvature zero crossing.
  auto d2 = [&](std::size_t i) { return smooth[i - 1] - 2.0 * smooth[i] + smooth[i + 1]; };
  double position = static_cast<double>(best);
  if (best >= 1 && best + 2 < n) {
    const double a = d2(best);
    const double b = d2(best + 1);
    if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) position += a / (a - b);
  }

  StepSplit split;
  split.boundary = position;
  split.t1_pct = 100.0 * position / last;
  split.t2_pct = 100.0 - split.t1_pct;
  return split;
}

StepSplit split_steps(const StrideSegment& segment) { return split_steps(segment.normalized); }

double symmetry_angle(double x_left, double x_right) {
  if (!std::isfinite(x_left) || !std::isfinite(x_right)) {
    throw Error(ErrorCode::InvalidArgument, "symmetry angle inputs must be finite");
  }
  if (x_left == 0.0 && x_right == 0.0) throw Error(ErrorCode::BothZero, "both sides are zero");
  double deg = 45.0 - std::atan2(x_left, x_right) * 180.0 / std::numbers::pi;
  if (deg > 90.0) deg -= 180.0;
  if (deg <= -90.0) deg += 180.0;
  return deg * 100.0 / 90.0;
}

std::vector<double> normalize_strides(std::span<const double> samples, std::span<const std::size_t> peaks,
                                      std::size_t samples_per_stride) {
  if (peaks.size() < 2) throw Error(ErrorCode::TooFewPeaks, "need two peaks to normalize strides");
  std::vector<double> out;
  out.reserve((peaks.size() - 1) * samples_per_stride + 1);
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
    const auto stride = resample_linear(samples.subspan(peaks[i], peaks[i + 1] - peaks[i] + 1), samples_per_stride + 1);
    out.insert(out.end(), stride.begin(), stride.end() - 1);
  }
  out.push_back(samples[peaks.back()]);
  return out;
}

TrialAnalysis analyze_trial(const TimeSeries& series, const AnalysisConfig& config) {
  if (series.samples.empty()) throw Error(ErrorCode::NoStridesDetected, "empty series");
  for (double v : series.samples) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "series contains non-finite samples");
  }
  const auto [lo, hi] = std::minmax_element(series.samples.begin(), series.samples.end());
  if (*hi - *lo <= 0.0) throw Error(ErrorCode::NoStridesDetected, "series is constant");

  TrialAnalysis out;
  const auto filtered = butterworth_lowpass(series, config.filter);
  out.period_s = estimate_period(filtered.samples, series.dt);
  out.peaks = detect_peaks(filtered.samples, default_peak_config(filtered.samples, out.period_s, series.dt));
  if (out.peaks.size() < 3) {
    throw Error(ErrorCode::NoStridesDetected, std::to_string(out.peaks.size()) + " heel-strike peak(s) found");
  }

  const std::size_t period = kStrideLength - 1;
  const std::size_t strides = out.peaks.size() - 1;
  TimeSeries normalized;
  normalized.channel = series.channel;
  normalized.t0 = series.t0 + series.dt * static_cast<double>(out.peaks.front());
  normalized.dt = series.dt * static_cast<double>(out.peaks.back() - out.peaks.front()) /
                  static_cast<double>(strides * period);
  normalized.samples = normalize_strides(filtered.samples, out.peaks, period);

  out.decomposition = stl_decompose(normalized, period, config.stl);
  auto& dec = out.decomposition;

  std::vector<double> detrended(normalized.size());
  for (std::size_t i = 0; i < detrended.size(); ++i) detrended[i] = normalized.samples[i] - dec.trend[i];
  std::vector<StrideBounds> bounds;
  std::vector<std::size_t> grid;
  for (std::size_t s = 0; s <= strides; ++s) {
    grid.push_back(s * period);
    if (s < strides) bounds.emplace_back(s * period, (s + 1) * period);
  }
  const auto weights = fit_stride_weights(detrended, bounds, seasonal_template(dec.seasonal, period));
  dec.stride_weights = weights.weights;
  dec.weighted_rmse = weights.rmse;

  out.segments = segment_strides(dec.seasonal, grid, kStrideLength);
  out.records.reserve(strides);
  for (std::size_t s = 0; s < strides; ++s) {
    auto& seg = out.segments[s];
    seg.start_idx = out.peaks[s];
    seg.end_idx = out.peaks[s + 1];
    seg.weight = dec.stride_weights[s];
    const auto split = split_steps(seg);
    seg.t1_pct = config.swap_feet ? split.t2_pct : split.t1_pct;
    seg.t2_pct = 100.0 - seg.t1_pct;

    SymmetryRecord rec;
    rec.stride_index = s;
    rec.sa_pct = symmetry_angle(seg.t1_pct, seg.t2_pct);
    rec.trial_id = config.trial_id;
    rec.class_label = config.class_label;
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace gaitsym

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gaitsym {

inline constexpr double kDefaultSampleInterval = 1.0 / 40.0;

/// Uniformly sampled scalar channel. Torque channels are in N·m.
struct TimeSeries {
  double t0 = 0.0;
  double dt = kDefaultSampleInterval;
  std::vector<double> samples;
  std::string channel;

  std::size_t size() const noexcept { return samples.size(); }
  double duration() const noexcept { return dt * static_cast<double>(samples.size()); }
  double sample_rate() const noexcept { return 1.0 / dt; }
};

enum class FilterDesign {
  ImpulseInvariant,  // analog magnitude preserved up to fs/4
  Bilinear,          // prewarped at the cutoff
};

struct FilterSpec {
  int order = 4;
  double cutoff_hz = 5.0;
  bool zero_phase = true;
  FilterDesign design = FilterDesign::ImpulseInvariant;
};

struct PeakConfig {
  std::size_t min_distance_samples = 1;
  double min_prominence = 0.0;
};

/// One real second-order section y = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
/// First-order sections keep b2 = a2 = 0.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  double dc_gain() const noexcept { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

/// Digital Butterworth low-pass. Sections are summed in parallel for the
/// impulse-invariant design and cascaded for the bilinear design.
struct ButterworthDesign {
  std::vector<Biquad> sections;
  bool parallel = false;

  /// Complex frequency response magnitude at `freq_hz` for sample interval `dt`.
  double magnitude(double freq_hz, double dt) const;
};

ButterworthDesign design_butterworth(const FilterSpec& spec, double dt);

/// Analog Butterworth magnitude 1/sqrt(1 + (f/fc)^(2n)).
double butterworth_analog_gain(double freq_hz, double cutoff_hz, int order) noexcept;

/// Single causal pass, zero initial state.
std::vector<double> apply_filter(const ButterworthDesign& design, std::span<const double> x);

TimeSeries butterworth_lowpass(const TimeSeries& series, const FilterSpec& spec = {});

std::vector<double> resample_linear(std::span<const double> samples, std::size_t new_len);

/// Topographic prominence of the local maximum at `peak`.
double peak_prominence(std::span<const double> samples, std::size_t peak);

std::vector<std::size_t> detect_peaks(std::span<const double> samples, const PeakConfig& config);

/// Dominant period in seconds, searched over the physiologic stride range.
double estimate_period(std::span<const double> samples, double dt);

inline constexpr double kMinStridePeriod = 0.4;
inline constexpr double kMaxStridePeriod = 3.0;
inline constexpr double kMinPeriodicity = 0.25;

/// Indices where the centered second difference changes sign.
std::vector<std::size_t> inflection_points(std::span<const double> samples);

/// Centered moving average; the window shrinks symmetrically at the edges.
std::vector<double> moving_average(std::span<const double> samples, std::size_t width);

double median(std::vector<double> values);
/// Median absolute deviation around the median (unscaled).
double median_abs_deviation(std::span<const double> values);

/// Data-driven peak settings for stride detection.
PeakConfig default_peak_config(std::span<const double> filtered, double period_s, double dt);

}  // namespace gaitsym

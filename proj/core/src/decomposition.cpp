#include "gaitsym/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaitsym/error.hpp"
#include "gaitsym/loess.hpp"

namespace gaitsym {
namespace {

std::vector<double> iota_positions(std::size_t n, double first = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = first + static_cast<double>(i);
  return x;
}

// LOESS over equally spaced points, falling back to the observed value where
// the local fit is degenerate (e.g. robustness weights zeroed the window).
std::vector<double> smooth_series(std::span<const double> y, std::span<const double> rw, std::size_t q, int degree) {
  const auto x = iota_positions(y.size());
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto v = loess_at(x, y, rw, x[i], q, degree);
    if (!v) v = loess_at(x, y, rw, x[i], q, 0);
    out[i] = v ? *v : y[i];
  }
  return out;
}

std::vector<double> moving_sum_average(std::span<const double> x, std::size_t len) {
  if (x.size() < len) return {};
  std::vector<double> out(x.size() - len + 1);
  double s = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
  out[0] = s / static_cast<double>(len);
  for (std::size_t i = 1; i < out.size(); ++i) {
    s += x[i + len - 1] - x[i - 1];
    out[i] = s / static_cast<double>(len);
  }
  return out;
}

std::size_t next_odd_at_least(double v) {
  auto n = static_cast<std::size_t>(std::ceil(v - 1e-12));
  if (n % 2 == 0) ++n;
  return std::max<std::size_t>(n, 3);
}

// Cycle-subseries smoothing, extended by one cycle on each side. The result
// is indexed so that element P + t corresponds to time t.
std::vector<double> smooth_cycle_subseries(std::span<const double> detrended, std::span<const double> rw,
                                           std::size_t period, std::size_t q) {
  const std::size_t n = detrended.size();
  std::vector<double> extended(n + 2 * period, 0.0);
  std::vector<double> sub, sub_w;
  for (std::size_t j = 0; j < period; ++j) {
    sub.clear();
    sub_w.clear();
    for (std::size_t t = j; t < n; t += period) {
      sub.push_back(detrended[t]);
      sub_w.push_back(rw[t]);
    }
    const std::size_t m = sub.size();
    const auto x = iota_positions(m);
    for (std::ptrdiff_t k = -1; k <= static_cast<std::ptrdiff_t>(m); ++k) {
      auto v = loess_at(x, sub, sub_w, static_cast<double>(k), q, 1);
      if (!v) v = loess_at(x, sub, sub_w, static_cast<double>(k), q, 0);
      double value;
      if (v) {
        value = *v;
      } else {
        const auto nearest = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(m) - 1));
        value = sub[nearest];
      }
      extended[static_cast<std::size_t>(k + 1) * period + j] = value;
    }
  }
  return extended;
}

std::vector<double> bisquare_weights(std::span<const double> residual) {
  std::vector<double> abs_r(residual.size());
  for (std::size_t i = 0; i < residual.size(); ++i) abs_r[i] = std::abs(residual[i]);
  const double h = 6.0 * median(abs_r);
  std::vector<double> w(residual.size(), 1.0);
  if (!(h > 0.0)) return w;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    const double u = abs_r[i] / h;
    if (u <= 0.001) {
      w[i] = 1.0;
    } else if (u <= 0.999) {
      const double t = 1.0 - u * u;
      w[i] = t * t;
    } else {
      w[i] = 0.0;
    }
  }
  return w;
}

}  // namespace

double root_mean_square(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s / static_cast<double>(values.size()));
}

DecompositionResult stl_decompose(const TimeSeries& series, std::size_t period, const StlConfig& config) {
  const auto& y = series.samples;
  const std::size_t n = y.size();
  if (period < 4) throw Error(ErrorCode::SeriesTooShortForPeriod, "period must be at least 4 samples");
  if (n < 2 * period) {
    throw Error(ErrorCode::SeriesTooShortForPeriod,
                std::to_string(n) + " samples cannot hold two periods of " + std::to_string(period));
  }
  if (config.seasonal_span_cycles < 7 || config.seasonal_span_cycles % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "seasonal span must be an odd number of cycles >= 7");
  }
  if (config.trend_window < 0 || (config.trend_window > 0 && config.trend_window % 2 == 0)) {
    throw Error(ErrorCode::InvalidArgument, "trend window must be odd and positive");
  }
  if (config.inner_iterations < 1 || config.robustness_iterations < 0) {
    throw Error(ErrorCode::InvalidArgument, "STL needs >= 1 inner and >= 0 robustness iterations");
  }

  const auto ns = static_cast<std::size_t>(config.seasonal_span_cycles);
  const std::size_t nt = config.trend_window > 0 ? static_cast<std::size_t>(config.trend_window)
                                                 : next_odd_at_least(1.5 * static_cast<double>(period));
  const std::size_t nl = next_odd_at_least(static_cast<double>(period));

  std::vector<double> trend(n, 0.0), seasonal(n, 0.0), rw(n, 1.0), work(n);
  const std::vector<double> unit_weights(n, 1.0);

  for (int outer = 0; outer <= config.robustness_iterations; ++outer) {
    for (int inner = 0; inner < config.inner_iterations; ++inner) {
      for (std::size_t i = 0; i < n; ++i) work[i] = y[i] - trend[i];
      const auto cycles = smooth_cycle_subseries(work, rw, period, ns);

      auto low = moving_sum_average(cycles, period);
      low = moving_sum_average(low, period);
      low = moving_sum_average(low, 3);
      low = smooth_series(low, unit_weights, nl, 1);

      for (std::size_t i = 0; i < n; ++i) seasonal[i] = cycles[period + i] - low[i];
      for (std::size_t i = 0; i < n; ++i) work[i] = y[i] - seasonal[i];
      trend = smooth_series(work, rw, nt, 1);
    }
    if (outer < config.robustness_iterations) {
      for (std::size_t i = 0; i < n; ++i) work[i] = y[i] - trend[i] - seasonal[i];
      rw = bisquare_weights(work);
    }
  }

  // Each full cycle of the seasonal averages to zero; the offset moves into
  // the trend so the additive identity is untouched.
  for (std::size_t start = 0; start + period <= n; start += period) {
    double mean = 0.0;
    for (std::size_t i = start; i < start + period; ++i) mean += seasonal[i];
    mean /= static_cast<double>(period);
    for (std::size_t i = start; i < start + period; ++i) {
      seasonal[i] -= mean;
      trend[i] += mean;
    }
  }

  DecompositionResult out;
  out.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.residual[i] = y[i] - trend[i] - seasonal[i];
  out.trend = std::move(trend);
  out.seasonal = std::move(seasonal);
  out.period_samples = period;
  out.rmse = root_mean_square(out.residual);
  return out;
}

StrideWeights fit_stride_weights(std::span<const double> detrended, std::span<const StrideBounds> bounds,
                                 std::span<const double> stride_template) {
  if (stride_template.empty()) throw Error(ErrorCode::InvalidArgument, "empty stride template");
  StrideWeights out;
  out.weights.reserve(bounds.size());
  double sq = 0.0;
  std::size_t count = 0;
  std::size_t prev_end = 0;
  for (std::size_t s = 0; s < bounds.size(); ++s) {
    const auto [start, end] = bounds[s];
    if (end <= start) throw Error(ErrorCode::EmptyStride, "stride " + std::to_string(s) + " has no samples");
    if (end > detrended.size()) throw Error(ErrorCode::InvalidArgument, "stride bounds exceed the series");
    if (s > 0 && start < prev_end) throw Error(ErrorCode::InvalidArgument, "stride bounds overlap or are unordered");
    prev_end = end;

    const std::size_t len = end - start;
    std::vector<double> tmpl;
    if (len == stride_template.size()) {
      tmpl.assign(stride_template.begin(), stride_template.end());
    } else if (len >= 2 && stride_template.size() >= 2) {
      tmpl = resample_linear(stride_template, len);
    } else {
      tmpl.assign(len, stride_template.front());
    }

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      num += detrended[start + i] * tmpl[i];
      den += tmpl[i] * tmpl[i];
    }
    const double w = den > 0.0 ? num / den : 0.0;
    out.weights.push_back(w);
    for (std::size_t i = 0; i < len; ++i) {
      const double r = detrended[start + i] - w * tmpl[i];
      sq += r * r;
    }
    count += len;
  }
  out.rmse = count > 0 ? std::sqrt(sq / static_cast<double>(count)) : 0.0;
  return out;
}

std::vector<double> seasonal_template(std::span<const double> seasonal, std::size_t period) {
  std::vector<double> tmpl(period, 0.0);
  const std::size_t cycles = period > 0 ? seasonal.size() / period : 0;
  if (cycles == 0) throw Error(ErrorCode::SeriesTooShortForPeriod, "no full cycle in seasonal component");
  for (std::size_t c = 0; c < cycles; ++c) {
    for (std::size_t j = 0; j < period; ++j) tmpl[j] += seasonal[c * period + j];
  }
  for (double& v : tmpl) v /= static_cast<double>(cycles);
  return tmpl;
}

}  // namespace gaitsym

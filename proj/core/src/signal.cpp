#include "gaitsym/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <set>

#include "gaitsym/error.hpp"

namespace gaitsym {
namespace {

using cplx = std::complex<double>;

std::vector<cplx> analog_poles(int order, double omega_c) {
  std::vector<cplx> poles;
  poles.reserve(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    poles.push_back(omega_c * std::polar(1.0, theta));
  }
  return poles;
}

ButterworthDesign impulse_invariant(int order, double cutoff_hz, double dt) {
  const double wc = 2.0 * std::numbers::pi * cutoff_hz;
  const auto poles = analog_poles(order, wc);
  const double gain = std::pow(wc, order);

  ButterworthDesign design;
  design.parallel = true;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    const cplx p = poles[k];
    if (p.imag() < -1e-12 * wc) continue;  // handled with its conjugate
    cplx denom = 1.0;
    for (std::size_t j = 0; j < poles.size(); ++j) {
      if (j != k) denom *= p - poles[j];
    }
    const cplx r = gain / denom;
    const cplx a = std::exp(p * dt);
    Biquad s;
    if (std::abs(p.imag()) <= 1e-12 * wc) {
      s.b0 = dt * r.real();
      s.a1 = -a.real();
    } else {
      s.b0 = dt * 2.0 * r.real();
      s.b1 = -dt * 2.0 * (r * std::conj(a)).real();
      s.a1 = -2.0 * a.real();
      s.a2 = std::norm(a);
    }
    design.sections.push_back(s);
  }

  double dc = 0.0;
  for (const auto& s : design.sections) dc += s.dc_gain();
  for (auto& s : design.sections) {
    s.b0 /= dc;
    s.b1 /= dc;
    s.b2 /= dc;
  }
  return design;
}

ButterworthDesign bilinear(int order, double cutoff_hz, double dt) {
  const double k = 2.0 / dt;
  const double wc = k * std::tan(std::numbers::pi * cutoff_hz * dt);
  const auto poles = analog_poles(order, wc);

  ButterworthDesign design;
  design.parallel = false;
  for (const cplx& p : poles) {
    if (p.imag() < -1e-12 * wc) continue;
    Biquad s;
    if (std::abs(p.imag()) <= 1e-12 * wc) {
      const double pr = p.real();
      const double a0 = k - pr;
      s.b0 = wc / a0;
      s.b1 = wc / a0;
      s.a1 = (-k - pr) / a0;
    } else {
      const double m2 = std::norm(p);
      const double re = p.real();
      const double a0 = k * k - 2.0 * re * k + m2;
      s.b0 = m2 / a0;
      s.b1 = 2.0 * m2 / a0;
      s.b2 = m2 / a0;
      s.a1 = (-2.0 * k * k + 2.0 * m2) / a0;
      s.a2 = (k * k + 2.0 * re * k + m2) / a0;
    }
    design.sections.push_back(s);
  }
  return design;
}

struct SectionState {
  double z1 = 0.0;
  double z2 = 0.0;

  void settle(const Biquad& s, double input) {
    const double y = s.dc_gain() * input;
    z2 = s.b2 * input - s.a2 * y;
    z1 = s.b1 * input - s.a1 * y + z2;
  }

  double step(const Biquad& s, double x) {
    const double y = s.b0 * x + z1;
    z1 = s.b1 * x - s.a1 * y + z2;
    z2 = s.b2 * x - s.a2 * y;
    return y;
  }
};

// One causal pass. With `settle` the sections start in the steady state of a
// constant input equal to x[0].
std::vector<double> run(const ButterworthDesign& d, std::span<const double> x, bool settle) {
  std::vector<double> y(x.size(), 0.0);
  if (x.empty()) return y;
  std::vector<SectionState> state(d.sections.size());
  if (d.parallel) {
    if (settle) {
      for (std::size_t s = 0; s < state.size(); ++s) state[s].settle(d.sections[s], x[0]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      double acc = 0.0;
      for (std::size_t s = 0; s < state.size(); ++s) acc += state[s].step(d.sections[s], x[i]);
      y[i] = acc;
    }
  } else {
    if (settle) {
      double level = x[0];
      for (std::size_t s = 0; s < state.size(); ++s) {
        state[s].settle(d.sections[s], level);
        level *= d.sections[s].dc_gain();
      }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      double v = x[i];
      for (std::size_t s = 0; s < state.size(); ++s) v = state[s].step(d.sections[s], v);
      y[i] = v;
    }
  }
  return y;
}

std::vector<double> forward_backward(const ButterworthDesign& d, std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  auto y = run(d, ext, true);
  std::reverse(y.begin(), y.end());
  y = run(d, y, true);
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace

double ButterworthDesign::magnitude(double freq_hz, double dt) const {
  const cplx zinv = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz * dt);
  cplx h = parallel ? cplx{0.0} : cplx{1.0};
  for (const auto& s : sections) {
    const cplx num = s.b0 + s.b1 * zinv + s.b2 * zinv * zinv;
    const cplx den = 1.0 + s.a1 * zinv + s.a2 * zinv * zinv;
    if (parallel) {
      h += num / den;
    } else {
      h *= num / den;
    }
  }
  return std::abs(h);
}

ButterworthDesign design_butterworth(const FilterSpec& spec, double dt) {
  if (spec.order < 1 || !(spec.cutoff_hz > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "filter order, cutoff and dt must be positive");
  }
  const double nyquist = 0.5 / dt;
  if (spec.cutoff_hz >= nyquist) {
    throw Error(ErrorCode::CutoffAboveNyquist,
                "cutoff " + std::to_string(spec.cutoff_hz) + " Hz >= Nyquist " + std::to_string(nyquist) + " Hz");
  }
  return spec.design == FilterDesign::Bilinear ? bilinear(spec.order, spec.cutoff_hz, dt)
                                               : impulse_invariant(spec.order, spec.cutoff_hz, dt);
}

double butterworth_analog_gain(double freq_hz, double cutoff_hz, int order) noexcept {
  return 1.0 / std::sqrt(1.0 + std::pow(freq_hz / cutoff_hz, 2.0 * order));
}

std::vector<double> apply_filter(const ButterworthDesign& design, std::span<const double> x) {
  return run(design, x, false);
}

TimeSeries butterworth_lowpass(const TimeSeries& series, const FilterSpec& spec) {
  const auto design = design_butterworth(spec, series.dt);
  const std::size_t n = series.size();
  if (n < static_cast<std::size_t>(3 * spec.order) || n < 2) {
    throw Error(ErrorCode::SeriesTooShort,
                std::to_string(n) + " samples, need at least " + std::to_string(3 * spec.order));
  }

  TimeSeries out = series;
  if (!spec.zero_phase) {
    out.samples = run(design, series.samples, true);
    return out;
  }

  const std::size_t pad = std::min<std::size_t>(3 * static_cast<std::size_t>(spec.order), n - 1);
  auto fwd = forward_backward(design, series.samples, pad);
  std::vector<double> reversed(series.samples.rbegin(), series.samples.rend());
  auto bwd = forward_backward(design, reversed, pad);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = 0.5 * (fwd[i] + bwd[n - 1 - i]);
  return out;
}

std::vector<double> resample_linear(std::span<const double> samples, std::size_t new_len) {
  const std::size_t n = samples.size();
  if (n < 2 || new_len < 2) {
    throw Error(ErrorCode::InputTooShort, "resampling needs at least 2 input and 2 output samples");
  }
  std::vector<double> out(new_len);
  const double scale = static_cast<double>(n - 1) / static_cast<double>(new_len - 1);
  for (std::size_t i = 0; i < new_len; ++i) {
    const double pos = static_cast<double>(i) * scale;
    const auto j = std::min(static_cast<std::size_t>(pos), n - 2);
    const double frac = pos - static_cast<double>(j);
    out[i] = samples[j] + frac * (samples[j + 1] - samples[j]);
  }
  out.front() = samples.front();
  out.back() = samples.back();
  return out;
}

double peak_prominence(std::span<const double> x, std::size_t peak) {
  const double h = x[peak];
  double left_min = h;
  for (std::size_t j = peak; j-- > 0;) {
    if (x[j] > h) break;
    left_min = std::min(left_min, x[j]);
  }
  double right_min = h;
  for (std::size_t j = peak + 1; j < x.size(); ++j) {
    if (x[j] > h) break;
    right_min = std::min(right_min, x[j]);
  }
  return h - std::max(left_min, right_min);
}

std::vector<std::size_t> detect_peaks(std::span<const double> x, const PeakConfig& config) {
  const std::size_t n = x.size();
  std::vector<std::size_t> candidates;
  if (n < 3) return candidates;

  // Local maxima; flat tops report their (left-)middle sample.
  std::size_t i = 1;
  while (i + 1 < n) {
    if (x[i - 1] < x[i]) {
      std::size_t ahead = i + 1;
      while (ahead < n && x[ahead] == x[i]) ++ahead;
      if (ahead < n && x[ahead] < x[i]) {
        candidates.push_back((i + ahead - 1) / 2);
        i = ahead;
        continue;
      }
    }
    ++i;
  }

  struct Scored {
    std::size_t index;
    double prominence;
  };
  std::vector<Scored> scored;
  for (auto c : candidates) {
    const double p = peak_prominence(x, c);
    if (p >= config.min_prominence) scored.push_back({c, p});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.prominence != b.prominence) return a.prominence > b.prominence;
    return a.index < b.index;
  });

  const std::size_t dist = std::max<std::size_t>(1, config.min_distance_samples);
  std::set<std::size_t> kept;
  for (const auto& s : scored) {
    auto next = kept.lower_bound(s.index);
    if (next != kept.end() && *next - s.index < dist) continue;
    if (next != kept.begin() && s.index - *std::prev(next) < dist) continue;
    kept.insert(s.index);
  }
  return {kept.begin(), kept.end()};
}

double estimate_period(std::span<const double> samples, double dt) {
  const std::size_t n = samples.size();
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(std::max<std::size_t>(n, 1));
  std::vector<double> x(n);
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = samples[i] - mean;
    energy += x[i] * x[i];
  }
  if (n < 4 || energy <= 0.0) throw Error(ErrorCode::NoPeriodFound, "signal is constant or too short");

  const auto lag_lo = static_cast<std::size_t>(std::ceil(kMinStridePeriod / dt - 1e-9));
  auto lag_hi = static_cast<std::size_t>(std::floor(kMaxStridePeriod / dt + 1e-9));
  lag_hi = std::min(lag_hi, n - 2);
  if (lag_lo < 1 || lag_hi <= lag_lo) throw Error(ErrorCode::NoPeriodFound, "series shorter than the search range");

  auto acf = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += x[t] * x[t + lag];
    return s / energy;
  };
  std::vector<double> r(lag_hi + 2, 0.0);
  for (std::size_t k = lag_lo - 1; k <= lag_hi + 1; ++k) r[k] = acf(k);

  std::size_t best = 0;
  double best_r = -2.0;
  for (std::size_t k = lag_lo; k <= lag_hi; ++k) {
    if (r[k] > r[k - 1] && r[k] >= r[k + 1] && r[k] > best_r) {
      best = k;
      best_r = r[k];
    }
  }
  if (best == 0 || best_r < kMinPeriodicity) {
    throw Error(ErrorCode::NoPeriodFound, "no autocorrelation maximum between 0.4 s and 3 s");
  }
  const double curv = r[best - 1] - 2.0 * r[best] + r[best + 1];
  double shift = 0.0;
  if (curv < 0.0) shift = std::clamp(0.5 * (r[best - 1] - r[best + 1]) / curv, -0.5, 0.5);
  return (static_cast<double>(best) + shift) * dt;
}

std::vector<std::size_t> inflection_points(std::span<const double> x) {
  std::vector<std::size_t> out;
  const std::size_t n = x.size();
  if (n < 3) return out;

  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * scale;

  int prev_sign = 0;
  std::size_t prev_idx = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d2 = x[i - 1] - 2.0 * x[i] + x[i + 1];
    const int sign = d2 > tol ? 1 : (d2 < -tol ? -1 : 0);
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) {
      out.push_back(i == prev_idx + 1 ? prev_idx : (prev_idx + i) / 2);
    }
    prev_sign = sign;
    prev_idx = i;
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> x, std::size_t width) {
  const std::size_t n = x.size();
  const std::size_t half = width / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = std::min({half, i, n - 1 - i});
    double s = 0.0;
    for (std::size_t j = i - h; j <= i + h; ++j) s += x[j];
    out[i] = s / static_cast<double>(2 * h + 1);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

double median_abs_deviation(std::span<const double> values) {
  const double m = median({values.begin(), values.end()});
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - m));
  return median(std::move(dev));
}

PeakConfig default_peak_config(std::span<const double> filtered, double period_s, double dt) {
  PeakConfig cfg;
  cfg.min_distance_samples = static_cast<std::size_t>(std::max(1.0, std::round(0.7 * period_s / dt)));
  cfg.min_prominence = 0.25 * 1.4826 * median_abs_deviation(filtered);
  return cfg;
}

}  // namespace gaitsym

#include "gaitsym/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gaitsym/error.hpp"

namespace gaitsym {
namespace {

// Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double critical_value(double level, std::size_t n, CriticalValue kind) {
  const double p = 0.5 * (1.0 + level);
  if (kind == CriticalValue::StudentT) return student_t_quantile(p, static_cast<double>(n - 1));
  return normal_quantile(p);
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "confidence level must lie in (0, 1)");
}

}  // namespace

std::string_view to_string(StrideLabel label) noexcept {
  return label == StrideLabel::Asymmetric ? "asymmetric" : "symmetric";
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

SummaryStats summarize(std::span<const double> values, double level, CriticalValue critical) {
  if (values.size() < 2) throw Error(ErrorCode::TooFewValues, "need at least two values");
  require_level(level);
  SummaryStats s;
  s.n = values.size();
  s.level = level;
  s.mean = mean(values);
  s.sd = sample_sd(values);
  s.sem = s.sd / std::sqrt(static_cast<double>(s.n));
  const double half = critical_value(level, s.n, critical) * s.sem;
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

SummaryStats reference_range(std::span<const double> values, double level) {
  auto s = summarize(values, level);
  const double half = normal_quantile(0.5 * (1.0 + level)) * s.sd;
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "paired samples differ in length");
  if (a.size() < 2) throw Error(ErrorCode::TooFewValues, "need at least two pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];

  TTestResult r;
  r.df = d.size() - 1;
  const double m = mean(d);
  const double sd = sample_sd(d);
  if (sd == 0.0) {
    if (m == 0.0) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_stat = std::copysign(std::numeric_limits<double>::infinity(), m);
      r.p_value = 0.0;
      r.degenerate = true;
    }
  } else {
    r.t_stat = m / (sd / std::sqrt(static_cast<double>(d.size())));
    const double nu = static_cast<double>(r.df);
    r.p_value = std::clamp(incomplete_beta(0.5 * nu, 0.5, nu / (nu + r.t_stat * r.t_stat)), 0.0, 1.0);
  }
  r.significant = r.p_value < kSignificanceLevel;
  return r;
}

std::vector<StrideLabel> classify_strides(std::span<const double> sa_values, const SummaryStats& reference) {
  std::vector<StrideLabel> labels;
  labels.reserve(sa_values.size());
  for (double sa : sa_values) {
    labels.push_back(sa < reference.ci_low || sa > reference.ci_high ? StrideLabel::Asymmetric
                                                                     : StrideLabel::Symmetric);
  }
  return labels;
}

ClassificationMetrics metrics(std::span<const StrideLabel> predicted, std::span<const StrideLabel> truth) {
  if (predicted.size() != truth.size()) throw Error(ErrorCode::LengthMismatch, "label lists differ in length");
  ClassificationMetrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == StrideLabel::Asymmetric;
    const bool t = truth[i] == StrideLabel::Asymmetric;
    if (p && t) ++m.tp;
    else if (p) ++m.fp;
    else if (t) ++m.fn;
    else ++m.tn;
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.accuracy = ratio(m.tp + m.tn, predicted.size());
  return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::InvalidArgument, "probability must lie in [0, 1]");
  }
  // Acklam's rational approximation, then one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "probability must lie in (0, 1)");
  // Bracket then bisect; the CDF is monotone.
  double lo = -1.0, hi = 1.0;
  while (student_t_cdf(lo, df) > p) lo *= 2.0;
  while (student_t_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> qq_pairs(std::span<const double> values) {
  std::vector<std::pair<double, double>> out;
  if (values.size() < 2) return out;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = mean(values);
  const double sd = sample_sd(values);
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double theoretical = normal_quantile((static_cast<double>(i) + 0.5) / n);
    const double empirical = sd > 0.0 ? (sorted[i] - m) / sd : 0.0;
    out.emplace_back(theoretical, empirical);
  }
  return out;
}

}  // namespace gaitsym

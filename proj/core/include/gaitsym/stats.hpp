#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace gaitsym {

enum class CriticalValue { Normal, StudentT };

/// Sample summary with a two-sided interval [ci_low, ci_high].
struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double sem = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
};

struct TTestResult {
  double t_stat = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  bool significant = false;
  bool degenerate = false;  // all differences equal and non-zero
};

inline constexpr double kSignificanceLevel = 0.001;

enum class StrideLabel { Symmetric, Asymmetric };
std::string_view to_string(StrideLabel label) noexcept;

struct ClassificationMetrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

/// Mean ± critical·SEM confidence interval for the mean.
SummaryStats summarize(std::span<const double> values, double level = 0.95,
                       CriticalValue critical = CriticalValue::Normal);

/// Normative range mean ± z·sd covering individual values at `level`.
SummaryStats reference_range(std::span<const double> values, double level = 0.95);

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// Closed interval: values on a bound count as symmetric.
std::vector<StrideLabel> classify_strides(std::span<const double> sa_values, const SummaryStats& reference);

/// "Asymmetric" is the positive class; zero denominators yield 0.
ClassificationMetrics metrics(std::span<const StrideLabel> predicted, std::span<const StrideLabel> truth);

double normal_cdf(double x);
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
double student_t_quantile(double p, double df);

/// (theoretical normal quantile, standardized sample quantile) pairs.
std::vector<std::pair<double, double>> qq_pairs(std::span<const double> values);

double mean(std::span<const double> values);
double sample_sd(std::span<const double> values);

}  // namespace gaitsym

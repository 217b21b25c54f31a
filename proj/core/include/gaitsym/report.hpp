#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaitsym/clustering.hpp"
#include "gaitsym/gait.hpp"
#include "gaitsym/stats.hpp"
#include "gaitsym/synth.hpp"

namespace gaitsym {

inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

std::string_view tool_version() noexcept;

struct StrideReport {
  std::size_t index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  double sa = 0.0;
  double weight = 0.0;
  std::vector<double> shape;  // normalized seasonal stride

  bool operator==(const StrideReport&) const = default;
};

struct ReportConfig {
  int filter_order = 4;
  double cutoff_hz = 5.0;
  bool zero_phase = true;
  std::string filter_design = "impulse-invariant";
  int seasonal_span_cycles = 7;
  int trend_window = 0;
  int inner_iterations = 2;
  int robustness_iterations = 1;
  bool swap_feet = false;
  std::string source;

  bool operator==(const ReportConfig&) const = default;
};

struct ReportSummary {
  double mean = 0.0;
  double sd = 0.0;
  double sem = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool operator==(const ReportSummary&) const = default;
};

struct Report {
  std::string schema_version{kSchemaVersion};
  std::string trial_id;
  std::string channel;
  std::optional<std::string> class_label;
  double period_s = 0.0;
  double rmse = 0.0;
  double weighted_rmse = 0.0;
  std::vector<StrideReport> strides;
  ReportSummary summary;
  ReportConfig config;
  std::string tool_version;

  std::size_t n_strides() const noexcept { return strides.size(); }
  std::vector<double> sa_values() const;
  bool operator==(const Report&) const = default;
};

Report make_report(const TrialAnalysis& analysis, const AnalysisConfig& config, std::string_view channel,
                   std::string_view source = {});

std::string report_to_json(const Report& report);
/// Throws UnsupportedVersion for an unknown schema major version.
Report report_from_json(std::string_view text);

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(std::string_view text);

std::string profile_to_json(const GaitProfile& profile);
GaitProfile profile_from_json(std::string_view text);

/// PCA basis, mixture parameters and cluster naming written by `cluster`.
struct ClusterModel {
  std::string schema_version{kSchemaVersion};
  PcaModel pca;
  GmmModel gmm;
  std::size_t symmetric_component = 0;
  std::vector<std::string> component_labels;
  std::optional<double> adjusted_rand_index;
  std::size_t n_strides = 0;
  std::string tool_version;
};

std::string model_to_json(const ClusterModel& model);
ClusterModel model_from_json(std::string_view text);

}  // namespace gaitsym

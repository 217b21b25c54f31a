#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gaitsym/signal.hpp"

namespace gaitsym {

/// Parameters of the synthetic walker-handle torque generator.
struct GaitProfile {
  std::string name = "custom";
  double stride_period_s = 1.1;
  double t1_fraction = 0.5;  // left-step share of the stride
  double amp_left = 1.0;     // N·m
  double amp_right = 1.0;    // N·m
  double trend_drift = 0.01;  // N·m per second
  double cadence_jitter = 0.02;
  double noise_sd = 0.05;  // N·m
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::string profile;
  std::vector<double> stride_boundaries;  // seconds, heel strikes that start each stride
  std::vector<double> step_boundaries;    // seconds, one per complete stride
  double t1_fraction = 0.5;
  double true_sa_pct = 0.0;
};

struct SyntheticTrial {
  TimeSeries series;
  GroundTruth truth;
};

void validate(const GaitProfile& profile);

/// Noise-free torque within one stride at phase `u` in [0, 1), excluding the
/// heel-strike bump. The steepest descent sits at `u = t1_fraction`.
double stride_level(double u, double t1_fraction, double amp_left, double amp_right);

/// Half-width of the heel-strike bump as a fraction of the stride.
inline constexpr double kHeelBumpHalfWidth = 0.07;

SyntheticTrial generate_trial(const GaitProfile& profile, double duration_s, double fs = 40.0);

/// Sym, RS, LS, RI, LI, LLD2 or LLD4 (case-insensitive).
GaitProfile preset(std::string_view name);
double preset_target_sa(std::string_view name);
std::vector<std::string> preset_names();

/// Left-step fraction whose symmetry angle equals `sa_pct`.
double t1_fraction_for_sa(double sa_pct);

}  // namespace gaitsym

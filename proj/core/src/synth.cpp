#include "gaitsym/synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

#include "gaitsym/error.hpp"
#include "gaitsym/gait.hpp"
#include "gaitsym/random.hpp"

namespace gaitsym {
namespace {

constexpr double kPlateauMargin = 0.10;  // flat high level kept around each heel strike
constexpr double kMaxRampHalfWidth = 0.08;
constexpr double kBumpScale = 0.6;

double half_cosine(double x) { return 0.5 * (1.0 - std::cos(std::numbers::pi * std::clamp(x, 0.0, 1.0))); }

double ramp_half_width(double b) {
  // The recovery ramp must stay at least 1.3x wider than the descent so the
  // descent remains the steepest interior inflection.
  return std::min({kMaxRampHalfWidth, b - kPlateauMargin, (1.0 - kPlateauMargin - b) / 3.6});
}

struct PresetRow {
  std::string_view name;
  double sa;
  double amp_left;
  double amp_right;
};

// Class targets are midpoints of per-class mean SA ranges; stiff-knee classes
// load the immobilized side less.
constexpr std::array<PresetRow, 7> kPresets{{
    {"Sym", 0.0, 1.0, 1.0},
    {"RS", 4.1, 1.0, 0.8},
    {"LS", -6.6, 0.8, 1.0},
    {"RI", 7.4, 1.0, 1.0},
    {"LI", -6.0, 1.0, 1.0},
    {"LLD2", 2.7, 1.0, 1.0},
    {"LLD4", 7.4, 1.0, 1.0},
}};

const PresetRow& find_preset(std::string_view name) {
  auto eq = [](std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return std::tolower(x) == std::tolower(y); });
  };
  for (const auto& row : kPresets) {
    if (eq(row.name, name)) return row;
  }
  throw Error(ErrorCode::UnknownPreset, std::string(name));
}

}  // namespace

void validate(const GaitProfile& p) {
  if (!(p.stride_period_s >= 0.4 && p.stride_period_s <= 3.0)) {
    throw Error(ErrorCode::InvalidArgument, "stride period must lie in [0.4, 3] s");
  }
  if (!(p.t1_fraction > 0.2 && p.t1_fraction < 0.8)) {
    throw Error(ErrorCode::InvalidArgument, "t1 fraction must lie in (0.2, 0.8)");
  }
  if (!(p.cadence_jitter >= 0.0) || !(p.noise_sd >= 0.0) || !std::isfinite(p.amp_left) ||
      !std::isfinite(p.amp_right) || !std::isfinite(p.trend_drift)) {
    throw Error(ErrorCode::InvalidArgument, "jitter and noise must be non-negative, amplitudes finite");
  }
}

double stride_level(double u, double b, double amp_left, double amp_right) {
  const double w = ramp_half_width(b);
  const double drop = amp_left + amp_right;
  const double recovery_end = 1.0 - kPlateauMargin;
  if (u < b - w) return amp_left;
  if (u <= b + w) return amp_left - drop * half_cosine((u - (b - w)) / (2.0 * w));
  if (u < recovery_end) return -amp_right + drop * half_cosine((u - (b + w)) / (recovery_end - b - w));
  return amp_left;
}

SyntheticTrial generate_trial(const GaitProfile& profile, double duration_s, double fs) {
  validate(profile);
  if (!(fs > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampling rate must be positive");
  if (!(duration_s >= 5.0 * profile.stride_period_s)) {
    throw Error(ErrorCode::DurationTooShort, "duration must cover at least five strides");
  }

  Rng rng(profile.seed);
  const double period = profile.stride_period_s;
  const double b = profile.t1_fraction;

  // Heel strikes: first at half a stride, then multiplicatively jittered periods.
  std::vector<double> strikes{-0.5 * period, 0.5 * period};
  while (strikes.back() <= duration_s + period) {
    const double jitter = std::clamp(1.0 + profile.cadence_jitter * rng.normal(), 0.5, 1.5);
    strikes.push_back(strikes.back() + period * jitter);
  }

  const auto n = static_cast<std::size_t>(std::floor(duration_s * fs + 1e-9));
  const double dt = 1.0 / fs;
  const double bump_height = kBumpScale * 0.5 * (profile.amp_left + profile.amp_right);
  const double bump_half = kHeelBumpHalfWidth * period;

  SyntheticTrial trial;
  trial.series.t0 = 0.0;
  trial.series.dt = dt;
  trial.series.channel = "tz";
  trial.series.samples.resize(n);

  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    while (k + 2 < strikes.size() && strikes[k + 1] <= t) ++k;
    const double start = strikes[k];
    const double len = strikes[k + 1] - start;
    double v = stride_level((t - start) / len, b, profile.amp_left, profile.amp_right);
    const double d = std::min(t - start, strikes[k + 1] - t);
    if (d < bump_half) v += bump_height * 0.5 * (1.0 + std::cos(std::numbers::pi * d / bump_half));
    v += profile.trend_drift * t;
    trial.series.samples[i] = v;
  }
  if (profile.noise_sd > 0.0) {
    for (double& v : trial.series.samples) v += profile.noise_sd * rng.normal();
  }

  // Annotate heel strikes far enough from the edges to be resolvable as peaks.
  const double margin = 0.1 * period;
  const double last_t = static_cast<double>(n - 1) * dt;
  auto& truth = trial.truth;
  truth.profile = profile.name;
  truth.t1_fraction = b;
  truth.true_sa_pct = symmetry_angle(b, 1.0 - b);
  for (std::size_t s = 0; s + 1 < strikes.size(); ++s) {
    if (strikes[s] >= margin && strikes[s] <= last_t - margin) {
      if (!truth.stride_boundaries.empty() && truth.stride_boundaries.back() == strikes[s - 1]) {
        truth.step_boundaries.push_back(strikes[s - 1] + b * (strikes[s] - strikes[s - 1]));
      }
      truth.stride_boundaries.push_back(strikes[s]);
    }
  }
  return trial;
}

GaitProfile preset(std::string_view name) {
  const auto& row = find_preset(name);
  GaitProfile p;
  p.name = std::string(row.name);
  p.t1_fraction = t1_fraction_for_sa(row.sa);
  p.amp_left = row.amp_left;
  p.amp_right = row.amp_right;
  return p;
}

double preset_target_sa(std::string_view name) { return find_preset(name).sa; }

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& row : kPresets) names.emplace_back(row.name);
  return names;
}

double t1_fraction_for_sa(double sa_pct) {
  const double angle = (45.0 - sa_pct * 0.9) * std::numbers::pi / 180.0;
  const double ratio = std::tan(angle);
  return ratio / (1.0 + ratio);
}

}  // namespace gaitsym

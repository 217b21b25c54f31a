#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gaitsym/error.hpp"
#include "gaitsym/gait.hpp"
#include "gaitsym/random.hpp"
#include "gaitsym/synth.hpp"

using namespace gaitsym;

namespace {

std::vector<double> noise_free_stride(double b) {
  std::vector<double> s(kStrideLength);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = stride_level(static_cast<double>(i) / static_cast<double>(kStrideLength - 1), b, 1.0, 1.0);
  }
  return s;
}


double mean_sa(const TrialAnalysis& a) {
  double s = 0.0;
  for (const auto& r : a.records) s += r.sa_pct;
  return s / static_cast<double>(a.records.size());
}

}  // namespace

TEST_CASE("symmetry angle reference values") {
  CHECK(symmetry_angle(50, 50) == doctest::Approx(0.0));
  CHECK(symmetry_angle(3.0, -3.0) == doctest::Approx(100.0));
  CHECK(std::abs(symmetry_angle(55, 45) - -6.35) <= 0.01);
  CHECK(symmetry_angle(45, 55) == doctest::Approx(6.3451).epsilon(1e-4));
  try {
    symmetry_angle(0.0, 0.0);
    FAIL("expected BothZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BothZero);
  }
}

TEST_CASE("symmetry angle antisymmetry, scale invariance and range") {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const double a = 1e-3 + 100.0 * rng.uniform();
    const double b = 1e-3 + 100.0 * rng.uniform();
    const double k = 1e-2 + 50.0 * rng.uniform();
    const double sa = symmetry_angle(a, b);
    CHECK(std::abs(sa + symmetry_angle(b, a)) <= 1e-12);
    CHECK(std::abs(sa - symmetry_angle(k * a, k * b)) <= 1e-10);
    CHECK(std::abs(sa) < 50.0);
  }
}

TEST_CASE("segment_strides spans and lengths") {
  std::vector<double> seasonal(89);
  for (std::size_t i = 0; i < seasonal.size(); ++i) seasonal[i] = std::sin(0.3 * static_cast<double>(i));
  const std::vector<std::size_t> peaks{0, 44, 88};
  const auto segs = segment_strides(seasonal, peaks);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].start_idx == 0);
  CHECK(segs[0].end_idx == 44);
  CHECK(segs[1].start_idx == 44);
  CHECK(segs[1].end_idx == 88);
  for (const auto& s : segs) {
    CHECK(s.normalized.size() == kStrideLength);
    CHECK(s.normalized.front() == seasonal[s.start_idx]);
    CHECK(s.normalized.back() == seasonal[s.end_idx]);
  }
  const std::vector<std::size_t> single{10};
  try {
    segment_strides(seasonal, single);
    FAIL("expected TooFewPeaks");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPeaks);
  }
}

TEST_CASE("split_steps on generator stride shapes") {
  for (double b : {0.45, 0.5, 0.55}) {
    const auto split = split_steps(noise_free_stride(b));
    CAPTURE(b);
    CHECK(std::abs(split.t1_pct - 100.0 * b) <= 1.0);
    CHECK(split.t1_pct + split.t2_pct == 100.0);
  }
  try {
    split_steps(std::vector<double>(kStrideLength, 1.0));
    FAIL("expected NoStepBoundary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoStepBoundary);
  }
}

TEST_CASE("normalize_strides concatenates resampled strides") {
  std::vector<double> x(50);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const std::vector<std::size_t> peaks{5, 15, 40};
  const auto out = normalize_strides(x, peaks, 10);
  REQUIRE(out.size() == 21);
  CHECK(out[0] == 5.0);
  CHECK(out[10] == doctest::Approx(15.0));
  CHECK(out[20] == 40.0);
  CHECK(out[15] == doctest::Approx(27.5));
}

TEST_CASE("analyze_trial on a symmetric generator trial") {
  auto p = preset("Sym");
  p.seed = 1;
  const auto trial = generate_trial(p, 30.0);
  AnalysisConfig cfg;
  cfg.trial_id = "sym-1";
  cfg.class_label = "Sym";
  const auto a = analyze_trial(trial.series, cfg);
  CHECK(std::abs(mean_sa(a)) < 1.0);
  CHECK(a.records.size() == a.segments.size());
  CHECK(a.records.size() == a.peaks.size() - 1);
  CHECK(a.decomposition.stride_weights.size() == a.segments.size());
  for (const auto& r : a.records) {
    CHECK(r.trial_id == "sym-1");
    CHECK(r.class_label == std::optional<std::string>("Sym"));
    CHECK(std::isfinite(r.sa_pct));
  }
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const auto& s = a.segments[i];
    CHECK(s.end_idx > s.start_idx);
    if (i > 0) CHECK(s.start_idx == a.segments[i - 1].end_idx);
    CHECK(s.t1_pct + s.t2_pct == 100.0);
    CHECK(s.normalized.size() == kStrideLength);
  }
}

TEST_CASE("analyze_trial recovers a 55 percent left step") {
  auto p = GaitProfile{};
  p.t1_fraction = 0.55;
  p.seed = 4;
  const auto a = analyze_trial(generate_trial(p, 30.0).series);
  CHECK(std::abs(mean_sa(a) - symmetry_angle(55, 45)) <= 1.5);
}

TEST_CASE("segments match generator stride annotations") {
  auto p = GaitProfile{};
  p.seed = 42;
  const auto trial = generate_trial(p, 30.0);
  const auto a = analyze_trial(trial.series);
  const auto& strikes = trial.truth.stride_boundaries;
  REQUIRE(a.segments.size() + 1 == strikes.size());
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const double t0 = static_cast<double>(a.segments[i].start_idx) * trial.series.dt;
    const double t1 = static_cast<double>(a.segments[i].end_idx) * trial.series.dt;
    CHECK(std::abs(t0 - strikes[i]) < 0.1);
    CHECK(std::abs(t1 - strikes[i + 1]) < 0.1);
  }
}

TEST_CASE("swap_feet mirrors the symmetry angle") {
  auto p = preset("RI");
  p.seed = 9;
  const auto trial = generate_trial(p, 30.0);
  AnalysisConfig swapped;
  swapped.swap_feet = true;
  const auto a = analyze_trial(trial.series);
  const auto b = analyze_trial(trial.series, swapped);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].sa_pct == doctest::Approx(-b.records[i].sa_pct));
}

TEST_CASE("analyze_trial is deterministic") {
  auto p = preset("LS");
  p.seed = 3;
  const auto trial = generate_trial(p, 20.0);
  const auto a = analyze_trial(trial.series);
  const auto b = analyze_trial(trial.series);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].sa_pct == b.records[i].sa_pct);
}

TEST_CASE("analyze_trial rejects empty and flat input") {
  TimeSeries zero;
  zero.samples.assign(400, 0.0);
  try {
    analyze_trial(zero);
    FAIL("expected NoStridesDetected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoStridesDetected);
  }
  TimeSeries nan = zero;
  nan.samples[10] = std::nan("");
  CHECK_THROWS_AS(analyze_trial(nan), Error);
}

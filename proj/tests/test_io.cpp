#include <filesystem>
#include <fstream>
#include <regex>

#include "doctest.h"
#include "gaitsym/error.hpp"
#include "gaitsym/io.hpp"
#include "gaitsym/random.hpp"
#include "gaitsym/report.hpp"
#include "gaitsym/svg.hpp"
#include "gaitsym/synth.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gaitsym;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

// Minimal well-formedness check: balanced tags and a single root element.
bool balanced_xml(const std::string& text) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^>]*?(/?)>)");
  int roots = 0;
  for (std::sregex_iterator it(text.begin(), text.end(), tag), end; it != end; ++it) {
    const auto& m = *it;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else if (m[3] != "/") {
      if (stack.empty()) ++roots;
      stack.push_back(m[2]);
    } else if (stack.empty()) {
      ++roots;
    }
  }
  return stack.empty() && roots == 1;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("parse a small well-formed trial") {
  const std::string csv =
      "time,fx,fy,fz,tx,ty,tz\n"
      "0,1,2,3,4,5,6\n"
      "0.025,1,2,3,4,5,6.5\n"
      "0.05,1,2,3,4,5,7\n";
  const auto d = parse_trial_text(csv);
  CHECK(d.channels.size() == 6);
  CHECK(d.channel("tz").samples == std::vector<double>{6, 6.5, 7});
  CHECK(d.channel("fx").size() == 3);
  CHECK(d.channel("tz").dt == doctest::Approx(0.025));
  CHECK(code_of([&] { d.channel("q"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("trial parsing errors") {
  CHECK(code_of([] { parse_trial_text("time,fx,fy,fz,tx,ty\n0,1,2,3,4,5\n"); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_trial_text(""); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_trial_text("time,fx,fy,fz,tx,ty,tz\n0,1,2,3,4,5,6\n0.025,1,2,3\n"); }) ==
        ErrorCode::MalformedRow);
  CHECK(code_of([] { parse_trial_text("time,fx,fy,fz,tx,ty,tz\n0,1,2,3,4,5,6\n0.025,1,2,x,4,5,6\n"); }) ==
        ErrorCode::MalformedRow);
  CHECK(code_of([] {
          parse_trial_text("time,fx,fy,fz,tx,ty,tz\n0,0,0,0,0,0,0\n0.025,0,0,0,0,0,0\n0.05,0,0,0,0,0,0\n0.09,0,0,0,0,0,0\n");
        }) == ErrorCode::NonUniformSampling);
  CHECK(code_of([] { parse_trial_text("time,fx,fy,fz,tx,ty,tz\n0,0,0,0,0,0,0\n0,0,0,0,0,0,0\n"); }) ==
        ErrorCode::NonUniformSampling);
  try {
    parse_trial_text("time,fx,fy,fz,tx,ty,tz\n0,0,0,0,0,0,0\n0.025,0,0,nan,0,0,0\n", "t.csv");
    FAIL("expected NonFiniteValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteValue);
    CHECK(std::string(e.what()).find("t.csv:3") != std::string::npos);
  }
  CHECK(code_of([] { parse_trial("/nonexistent/dir/trial.csv"); }) == ErrorCode::IoError);
}

TEST_CASE("synthetic trials round-trip bit-exactly through CSV") {
  auto p = preset("LI");
  p.seed = 5;
  const auto trial = generate_trial(p, 12.0);
  testing::TempDir dir;
  const auto path = dir.file("t.csv");
  write_file_atomic(path, format_trial_csv(trial.series));
  const auto back = parse_trial(path);
  CHECK(back.channel("tz").samples == trial.series.samples);
  CHECK(back.channel("tz").dt == doctest::Approx(trial.series.dt).epsilon(1e-12));
  for (const char* axis : {"fx", "fy", "fz", "tx", "ty"}) {
    for (double v : back.channel(axis).samples) CHECK(v == 0.0);
  }
}

TEST_CASE("atomic writes leave no temporary files") {
  testing::TempDir dir;
  write_file_atomic(dir.file("a.txt"), "first");
  write_file_atomic(dir.file("a.txt"), "second");
  CHECK(read_text_file(dir.file("a.txt")) == "second");
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++n;
  CHECK(n == 1);
  CHECK(code_of([&] { write_file_atomic(dir.file("missing/b.txt"), "x"); }) == ErrorCode::IoError);
}

TEST_CASE("list_files filters and sorts") {
  testing::TempDir dir;
  for (const char* f : {"b.json", "a.json", "c.txt"}) write_file_atomic(dir.file(f), "{}");
  const auto files = list_files(dir.path(), ".json");
  REQUIRE(files.size() == 2);
  CHECK(files[0].filename() == "a.json");
  CHECK(files[1].filename() == "b.json");
  CHECK(code_of([&] { list_files(dir.file("c.txt"), ".json"); }) == ErrorCode::IoError);
}

TEST_CASE("report JSON round-trips losslessly") {
  auto p = preset("RS");
  p.seed = 2;
  const auto trial = generate_trial(p, 20.0);
  AnalysisConfig cfg;
  cfg.trial_id = "rs-2";
  cfg.class_label = "RS";
  const auto report = make_report(analyze_trial(trial.series, cfg), cfg, "tz", "rs2.csv");
  CHECK(report.n_strides() > 10);
  CHECK(report.strides.front().shape.size() == kStrideLength);
  const auto text = report_to_json(report);
  const auto back = report_from_json(text);
  CHECK(back == report);
  CHECK(report_to_json(back) == text);

  auto j = nlohmann::json::parse(text);
  CHECK(j["schema_version"] == "1.0");
  for (const char* key : {"trial_id", "channel", "n_strides", "strides", "summary", "config", "tool_version"}) {
    CHECK(j.contains(key));
  }
  for (const char* key : {"index", "t1", "t2", "sa", "weight"}) CHECK(j["strides"][0].contains(key));
}

TEST_CASE("report parser rejects unknown major versions and malformed documents") {
  Report r;
  r.trial_id = "x";
  auto j = nlohmann::json::parse(report_to_json(r));
  j["schema_version"] = "1.7";
  CHECK_NOTHROW(report_from_json(j.dump()));
  j["schema_version"] = "2.0";
  CHECK(code_of([&] { report_from_json(j.dump()); }) == ErrorCode::UnsupportedVersion);
  j.erase("schema_version");
  CHECK(code_of([&] { report_from_json(j.dump()); }) == ErrorCode::UnsupportedVersion);
  CHECK(code_of([] { report_from_json("{not json"); }) == ErrorCode::MalformedDocument);
  CHECK(code_of([] { report_from_json(R"({"schema_version":"1.0"})"); }) == ErrorCode::MalformedDocument);
}

TEST_CASE("ground truth and profile JSON round-trip") {
  auto p = preset("LLD2");
  p.seed = 77;
  const auto trial = generate_trial(p, 10.0);
  const auto t = truth_from_json(truth_to_json(trial.truth));
  CHECK(t.stride_boundaries == trial.truth.stride_boundaries);
  CHECK(t.step_boundaries == trial.truth.step_boundaries);
  CHECK(t.true_sa_pct == trial.truth.true_sa_pct);
  const auto q = profile_from_json(profile_to_json(p));
  CHECK(q.t1_fraction == p.t1_fraction);
  CHECK(q.seed == 77);
  CHECK(profile_from_json(R"({"t1_fraction": 0.6})").stride_period_s == 1.1);
  CHECK_THROWS_AS(profile_from_json(R"({"t1_fraction": 0.95})"), Error);
}

TEST_CASE("cluster model JSON round-trips") {
  Rng rng(3);
  Eigen::MatrixXd shapes(40, 10);
  for (Eigen::Index i = 0; i < shapes.rows(); ++i) {
    for (Eigen::Index j = 0; j < shapes.cols(); ++j) shapes(i, j) = rng.normal() + (i % 2 ? 3.0 : 0.0);
  }
  ClusterModel m;
  m.pca = pca_fit(shapes, 2);
  m.gmm = gmm_fit(pca_project_rows(m.pca, shapes), 2, 9);
  m.symmetric_component = 1;
  m.component_labels = {"A", "B"};
  m.adjusted_rand_index = 0.5;
  m.n_strides = 40;
  const auto text = model_to_json(m);
  const auto back = model_from_json(text);
  CHECK(model_to_json(back) == text);
  CHECK(back.pca.components == m.pca.components);
  CHECK(back.gmm.covariances[1] == m.gmm.covariances[1]);
  CHECK(back.component_labels == m.component_labels);
}

TEST_CASE("SVG outputs are well-formed with one polyline per series") {
  Rng rng(1);
  Eigen::MatrixXd pts(60, 2);
  for (Eigen::Index i = 0; i < 60; ++i) pts(i, 0) = rng.normal() + (i < 30 ? 0 : 6), pts(i, 1) = rng.normal();
  const auto g = gmm_fit(pts, 3, 2);
  const auto assign = gmm_predict(g, pts);
  const std::vector<std::string> labels{"a<b", "", "c"};
  const auto svg = cluster_scatter_svg(pts, assign, g, labels);
  CHECK(balanced_xml(svg));
  CHECK(count(svg, "<polyline") == 3);
  CHECK(count(svg, "<circle") == 60);
  CHECK(svg.find("a&lt;b") != std::string::npos);

  PcaModel pca = pca_fit(Eigen::MatrixXd::Random(10, 20), 2);
  const std::vector<double> alphas{0, 0.5, 1};
  const auto stages = improvement_stages(pca, Eigen::Vector2d(1, 1), Eigen::Vector2d(0, 0), alphas);
  const auto svg2 = improvement_svg(stages);
  CHECK(balanced_xml(svg2));
  CHECK(count(svg2, "<polyline") == 3);
}

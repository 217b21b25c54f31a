#include "gaitsym/report.hpp"

#include <charconv>

#include "gaitsym/error.hpp"
#include "json.hpp"

namespace gaitsym {
namespace {

using nlohmann::json;

#ifndef GAITSYM_VERSION
#define GAITSYM_VERSION "0.0.0"
#endif

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, std::string(what) + ": " + e.what());
  }
}

void check_version(const json& j, std::string_view what) {
  const auto version = j.value("schema_version", std::string{});
  int major = -1;
  const auto dot = version.find('.');
  const auto head = std::string_view(version).substr(0, dot);
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), major);
  if (version.empty() || ec != std::errc{} || ptr != head.data() + head.size()) {
    throw Error(ErrorCode::UnsupportedVersion, std::string(what) + ": missing or malformed schema_version");
  }
  if (major != kSchemaMajor) {
    throw Error(ErrorCode::UnsupportedVersion, std::string(what) + ": schema version " + version + " not supported");
  }
}

// Field access that maps library exceptions onto validation errors.
template <typename F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string(what) + ": " + e.what());
  }
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) throw Error(ErrorCode::DimensionMismatch, "ragged matrix");
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

}  // namespace

std::string_view tool_version() noexcept { return GAITSYM_VERSION; }

std::vector<double> Report::sa_values() const {
  std::vector<double> out;
  out.reserve(strides.size());
  for (const auto& s : strides) out.push_back(s.sa);
  return out;
}

Report make_report(const TrialAnalysis& analysis, const AnalysisConfig& config, std::string_view channel,
                   std::string_view source) {
  Report r;
  r.trial_id = config.trial_id;
  r.channel = std::string(channel);
  r.class_label = config.class_label;
  r.period_s = analysis.period_s;
  r.rmse = analysis.decomposition.rmse;
  r.weighted_rmse = analysis.decomposition.weighted_rmse;
  r.tool_version = std::string(tool_version());
  for (std::size_t i = 0; i < analysis.segments.size(); ++i) {
    const auto& seg = analysis.segments[i];
    StrideReport s;
    s.index = seg.index;
    s.start = seg.start_idx;
    s.end = seg.end_idx;
    s.t1 = seg.t1_pct;
    s.t2 = seg.t2_pct;
    s.sa = analysis.records[i].sa_pct;
    s.weight = seg.weight;
    s.shape = seg.normalized;
    r.strides.push_back(std::move(s));
  }
  const auto sa = r.sa_values();
  if (sa.size() >= 2) {
    const auto st = summarize(sa);
    r.summary = {st.mean, st.sd, st.sem, st.ci_low, st.ci_high};
  } else if (sa.size() == 1) {
    r.summary = {sa[0], 0.0, 0.0, sa[0], sa[0]};
  }
  auto& c = r.config;
  c.filter_order = config.filter.order;
  c.cutoff_hz = config.filter.cutoff_hz;
  c.zero_phase = config.filter.zero_phase;
  c.filter_design = config.filter.design == FilterDesign::Bilinear ? "bilinear" : "impulse-invariant";
  c.seasonal_span_cycles = config.stl.seasonal_span_cycles;
  c.trend_window = config.stl.trend_window;
  c.inner_iterations = config.stl.inner_iterations;
  c.robustness_iterations = config.stl.robustness_iterations;
  c.swap_feet = config.swap_feet;
  c.source = std::string(source);
  return r;
}

std::string report_to_json(const Report& r) {
  json strides = json::array();
  for (const auto& s : r.strides) {
    strides.push_back({{"index", s.index},
                       {"start", s.start},
                       {"end", s.end},
                       {"t1", s.t1},
                       {"t2", s.t2},
                       {"sa", s.sa},
                       {"weight", s.weight},
                       {"shape", s.shape}});
  }
  const auto& c = r.config;
  json j = {
      {"schema_version", r.schema_version},
      {"trial_id", r.trial_id},
      {"channel", r.channel},
      {"class_label", r.class_label ? json(*r.class_label) : json(nullptr)},
      {"n_strides", r.n_strides()},
      {"period_s", r.period_s},
      {"rmse", r.rmse},
      {"weighted_rmse", r.weighted_rmse},
      {"strides", std::move(strides)},
      {"summary",
       {{"mean", r.summary.mean},
        {"sd", r.summary.sd},
        {"sem", r.summary.sem},
        {"ci_low", r.summary.ci_low},
        {"ci_high", r.summary.ci_high}}},
      {"config",
       {{"filter_order", c.filter_order},
        {"cutoff_hz", c.cutoff_hz},
        {"zero_phase", c.zero_phase},
        {"filter_design", c.filter_design},
        {"seasonal_span_cycles", c.seasonal_span_cycles},
        {"trend_window", c.trend_window},
        {"inner_iterations", c.inner_iterations},
        {"robustness_iterations", c.robustness_iterations},
        {"swap_feet", c.swap_feet},
        {"source", c.source}}},
      {"tool_version", r.tool_version},
  };
  return j.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
  const auto j = parse_json(text, "report");
  check_version(j, "report");
  return guarded("report", [&] {
    Report r;
    r.schema_version = j.at("schema_version").get<std::string>();
    r.trial_id = j.at("trial_id").get<std::string>();
    r.channel = j.at("channel").get<std::string>();
    if (j.contains("class_label") && !j.at("class_label").is_null()) {
      r.class_label = j.at("class_label").get<std::string>();
    }
    r.period_s = j.at("period_s").get<double>();
    r.rmse = j.at("rmse").get<double>();
    r.weighted_rmse = j.at("weighted_rmse").get<double>();
    for (const auto& s : j.at("strides")) {
      StrideReport sr;
      sr.index = s.at("index").get<std::size_t>();
      sr.start = s.at("start").get<std::size_t>();
      sr.end = s.at("end").get<std::size_t>();
      sr.t1 = s.at("t1").get<double>();
      sr.t2 = s.at("t2").get<double>();
      sr.sa = s.at("sa").get<double>();
      sr.weight = s.at("weight").get<double>();
      if (s.contains("shape")) sr.shape = s.at("shape").get<std::vector<double>>();
      r.strides.push_back(std::move(sr));
    }
    if (j.at("n_strides").get<std::size_t>() != r.strides.size()) {
      throw Error(ErrorCode::LengthMismatch, "report: n_strides disagrees with the stride list");
    }
    const auto& s = j.at("summary");
    r.summary = {s.at("mean").get<double>(), s.at("sd").get<double>(), s.at("sem").get<double>(),
                 s.at("ci_low").get<double>(), s.at("ci_high").get<double>()};
    const auto& c = j.at("config");
    r.config.filter_order = c.at("filter_order").get<int>();
    r.config.cutoff_hz = c.at("cutoff_hz").get<double>();
    r.config.zero_phase = c.at("zero_phase").get<bool>();
    r.config.filter_design = c.at("filter_design").get<std::string>();
    r.config.seasonal_span_cycles = c.at("seasonal_span_cycles").get<int>();
    r.config.trend_window = c.at("trend_window").get<int>();
    r.config.inner_iterations = c.at("inner_iterations").get<int>();
    r.config.robustness_iterations = c.at("robustness_iterations").get<int>();
    r.config.swap_feet = c.at("swap_feet").get<bool>();
    r.config.source = c.at("source").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    return r;
  });
}

std::string truth_to_json(const GroundTruth& t) {
  json j = {{"schema_version", kSchemaVersion},
            {"profile", t.profile},
            {"t1_fraction", t.t1_fraction},
            {"true_sa_pct", t.true_sa_pct},
            {"stride_boundaries", t.stride_boundaries},
            {"step_boundaries", t.step_boundaries}};
  return j.dump(2) + "\n";
}

GroundTruth truth_from_json(std::string_view text) {
  const auto j = parse_json(text, "ground truth");
  check_version(j, "ground truth");
  return guarded("ground truth", [&] {
    GroundTruth t;
    t.profile = j.at("profile").get<std::string>();
    t.t1_fraction = j.at("t1_fraction").get<double>();
    t.true_sa_pct = j.at("true_sa_pct").get<double>();
    t.stride_boundaries = j.at("stride_boundaries").get<std::vector<double>>();
    t.step_boundaries = j.at("step_boundaries").get<std::vector<double>>();
    return t;
  });
}

std::string profile_to_json(const GaitProfile& p) {
  json j = {{"name", p.name},
            {"stride_period_s", p.stride_period_s},
            {"t1_fraction", p.t1_fraction},
            {"amp_left", p.amp_left},
            {"amp_right", p.amp_right},
            {"trend_drift", p.trend_drift},
            {"cadence_jitter", p.cadence_jitter},
            {"noise_sd", p.noise_sd},
            {"seed", p.seed}};
  return j.dump(2) + "\n";
}

GaitProfile profile_from_json(std::string_view text) {
  const auto j = parse_json(text, "profile");
  return guarded("profile", [&] {
    GaitProfile p;
    p.name = j.value("name", p.name);
    p.stride_period_s = j.value("stride_period_s", p.stride_period_s);
    p.t1_fraction = j.value("t1_fraction", p.t1_fraction);
    p.amp_left = j.value("amp_left", p.amp_left);
    p.amp_right = j.value("amp_right", p.amp_right);
    p.trend_drift = j.value("trend_drift", p.trend_drift);
    p.cadence_jitter = j.value("cadence_jitter", p.cadence_jitter);
    p.noise_sd = j.value("noise_sd", p.noise_sd);
    p.seed = j.value("seed", p.seed);
    validate(p);
    return p;
  });
}

std::string model_to_json(const ClusterModel& m) {
  json components = json::array();
  for (std::size_t k = 0; k < m.gmm.n_components; ++k) {
    components.push_back({{"weight", m.gmm.weights[k]},
                          {"mean", vector_json(m.gmm.means[k])},
                          {"covariance", matrix_json(m.gmm.covariances[k])},
                          {"label", k < m.component_labels.size() ? m.component_labels[k] : std::string{}}});
  }
  json j = {
      {"schema_version", m.schema_version},
      {"pca",
       {{"k", m.pca.k},
        {"mean", vector_json(m.pca.mean)},
        {"components", matrix_json(m.pca.components)},
        {"explained_variance", m.pca.explained_variance}}},
      {"gmm",
       {{"n_components", m.gmm.n_components},
        {"seed", m.gmm.seed},
        {"log_likelihood", m.gmm.log_likelihood},
        {"iterations", m.gmm.iterations},
        {"converged", m.gmm.converged},
        {"components", std::move(components)}}},
      {"symmetric_component", m.symmetric_component},
      {"adjusted_rand_index", m.adjusted_rand_index ? json(*m.adjusted_rand_index) : json(nullptr)},
      {"n_strides", m.n_strides},
      {"tool_version", m.tool_version},
  };
  return j.dump(2) + "\n";
}

ClusterModel model_from_json(std::string_view text) {
  const auto j = parse_json(text, "model");
  check_version(j, "model");
  return guarded("model", [&] {
    ClusterModel m;
    m.schema_version = j.at("schema_version").get<std::string>();
    const auto& p = j.at("pca");
    m.pca.k = p.at("k").get<std::size_t>();
    m.pca.mean = vector_from(p.at("mean"));
    m.pca.components = matrix_from(p.at("components"));
    m.pca.explained_variance = p.at("explained_variance").get<std::vector<double>>();
    if (static_cast<std::size_t>(m.pca.components.rows()) != m.pca.k ||
        m.pca.components.cols() != m.pca.mean.size()) {
      throw Error(ErrorCode::DimensionMismatch, "model: PCA basis does not match its mean");
    }
    const auto& g = j.at("gmm");
    m.gmm.n_components = g.at("n_components").get<std::size_t>();
    m.gmm.seed = g.at("seed").get<std::uint64_t>();
    m.gmm.log_likelihood = g.at("log_likelihood").get<double>();
    m.gmm.iterations = g.at("iterations").get<std::size_t>();
    m.gmm.converged = g.at("converged").get<bool>();
    for (const auto& c : g.at("components")) {
      m.gmm.weights.push_back(c.at("weight").get<double>());
      m.gmm.means.push_back(vector_from(c.at("mean")));
      m.gmm.covariances.push_back(matrix_from(c.at("covariance")));
      m.component_labels.push_back(c.value("label", std::string{}));
      if (static_cast<std::size_t>(m.gmm.means.back().size()) != m.pca.k ||
          static_cast<std::size_t>(m.gmm.covariances.back().rows()) != m.pca.k ||
          static_cast<std::size_t>(m.gmm.covariances.back().cols()) != m.pca.k) {
        throw Error(ErrorCode::DimensionMismatch, "model: mixture dimension does not match PCA k");
      }
    }
    if (m.gmm.means.size() != m.gmm.n_components) {
      throw Error(ErrorCode::LengthMismatch, "model: n_components disagrees with the component list");
    }
    m.symmetric_component = j.at("symmetric_component").get<std::size_t>();
    if (m.symmetric_component >= m.gmm.n_components) {
      throw Error(ErrorCode::InvalidArgument, "model: symmetric_component out of range");
    }
    if (!j.at("adjusted_rand_index").is_null()) m.adjusted_rand_index = j.at("adjusted_rand_index").get<double>();
    m.n_strides = j.at("n_strides").get<std::size_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    return m;
  });
}

}  // namespace gaitsym

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gaitsym/clustering.hpp"
#include "gaitsym/error.hpp"
#include "gaitsym/gait.hpp"
#include "gaitsym/io.hpp"
#include "gaitsym/report.hpp"
#include "gaitsym/stats.hpp"
#include "gaitsym/svg.hpp"
#include "gaitsym/synth.hpp"
#include "json.hpp"

namespace gaitsym::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kSeedEnv = "GAITSYM_SEED";

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
    }
    return v;
  }
  return fallback;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_symmetric_label(std::string_view label) { return iequals(label, "sym") || iequals(label, "symmetric"); }

// Files are taken as given; directories contribute their *.json files in name order.
std::vector<fs::path> expand_reports(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      const auto files = list_files(in, ".json");
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

std::vector<Report> load_reports(const std::vector<fs::path>& paths) {
  std::vector<std::future<Report>> jobs;
  jobs.reserve(paths.size());
  for (const auto& p : paths) {
    jobs.push_back(std::async(std::launch::async, [p] {
      try {
        return report_from_json(read_text_file(p));
      } catch (const Error& e) {
        const std::string msg = e.what();
        throw Error(e.code(), p.string() + ": " + msg.substr(msg.find(": ") + 2));
      }
    }));
  }
  std::vector<Report> reports;
  reports.reserve(jobs.size());
  for (auto& j : jobs) reports.push_back(j.get());
  return reports;
}

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::InvalidArgument, "cannot parse alpha '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no alphas given");
  return out;
}

// synth ----------------------------------------------------------------------

struct SynthArgs {
  std::string profile;
  double duration = 30.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string truth;
  double fs = 40.0;
};

void run_synth(const SynthArgs& a) {
  GaitProfile profile;
  std::error_code ec;
  if (fs::is_regular_file(a.profile, ec)) {
    profile = profile_from_json(read_text_file(a.profile));
  } else {
    profile = preset(a.profile);
  }
  profile.seed = resolve_seed(a.seed, profile.seed);
  const auto trial = generate_trial(profile, a.duration, a.fs);
  write_file_atomic(a.out, format_trial_csv(trial.series));
  if (!a.truth.empty()) write_file_atomic(a.truth, truth_to_json(trial.truth));
}

// analyze --------------------------------------------------------------------

struct AnalyzeArgs {
  std::string in;
  std::string channel = "tz";
  std::string out;
  std::string strides;
  std::string qq;
  std::string label;
  std::string trial_id;
  bool swap_feet = false;
};

void run_analyze(const AnalyzeArgs& a) {
  const auto data = parse_trial(a.in);
  AnalysisConfig config;
  config.trial_id = a.trial_id.empty() ? fs::path(a.in).stem().string() : a.trial_id;
  if (!a.label.empty()) config.class_label = a.label;
  config.swap_feet = a.swap_feet;
  const auto analysis = analyze_trial(data.channel(a.channel), config);
  const auto report = make_report(analysis, config, a.channel, a.in);
  write_file_atomic(a.out, report_to_json(report));

  if (!a.strides.empty()) {
    std::string csv = "index,start,end,t1,t2,sa,weight\n";
    for (const auto& s : report.strides) {
      csv += std::to_string(s.index) + "," + std::to_string(s.start) + "," + std::to_string(s.end) + "," +
             fmt(s.t1) + "," + fmt(s.t2) + "," + fmt(s.sa) + "," + fmt(s.weight) + "\n";
    }
    write_file_atomic(a.strides, csv);
  }
  if (!a.qq.empty()) {
    std::string csv = "theoretical,sample\n";
    for (const auto& [t, s] : qq_pairs(report.sa_values())) csv += fmt(t) + "," + fmt(s) + "\n";
    write_file_atomic(a.qq, csv);
  }
}

// compare --------------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> a;
  std::vector<std::string> b;
  std::string out;
};

void run_compare(const CompareArgs& args) {
  const auto ra = load_reports(expand_reports(args.a));
  const auto rb = load_reports(expand_reports(args.b));
  if (ra.size() != rb.size()) {
    throw Error(ErrorCode::LengthMismatch, "groups hold " + std::to_string(ra.size()) + " and " +
                                               std::to_string(rb.size()) + " trials; pairing needs equal counts");
  }
  std::vector<double> ma, mb;
  for (const auto& r : ra) ma.push_back(mean(r.sa_values()));
  for (const auto& r : rb) mb.push_back(mean(r.sa_values()));
  const auto t = paired_t_test(ma, mb);
  json j = {{"schema_version", kSchemaVersion},
            {"n_pairs", ma.size()},
            {"mean_a", mean(ma)},
            {"mean_b", mean(mb)},
            {"trial_means_a", ma},
            {"trial_means_b", mb},
            {"t_stat", std::isfinite(t.t_stat) ? json(t.t_stat) : json(t.t_stat > 0 ? "inf" : "-inf")},
            {"df", t.df},
            {"p_value", t.p_value},
            {"significant", t.significant},
            {"alpha", kSignificanceLevel},
            {"degenerate", t.degenerate},
            {"tool_version", tool_version()}};
  write_file_atomic(args.out, j.dump(2) + "\n");
}

// classify -------------------------------------------------------------------

struct ClassifyArgs {
  std::vector<std::string> reference;
  std::vector<std::string> in;
  std::string out;
  double level = 0.95;
  std::string interval = "range";
};

void run_classify(const ClassifyArgs& a) {
  const auto refs = load_reports(expand_reports(a.reference));
  std::vector<double> pooled;
  for (const auto& r : refs) {
    const auto sa = r.sa_values();
    pooled.insert(pooled.end(), sa.begin(), sa.end());
  }
  const auto range = a.interval == "sem" ? summarize(pooled, a.level) : reference_range(pooled, a.level);

  const auto inputs = load_reports(expand_reports(a.in));
  std::vector<StrideLabel> predicted_all, truth_all;
  bool all_labelled = true;
  json trials = json::array();
  for (const auto& r : inputs) {
    const auto labels = classify_strides(r.sa_values(), range);
    std::size_t asym = 0;
    json strides = json::array();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      asym += labels[i] == StrideLabel::Asymmetric;
      strides.push_back({{"index", r.strides[i].index}, {"sa", r.strides[i].sa}, {"label", to_string(labels[i])}});
    }
    predicted_all.insert(predicted_all.end(), labels.begin(), labels.end());
    if (r.class_label) {
      const auto truth = is_symmetric_label(*r.class_label) ? StrideLabel::Symmetric : StrideLabel::Asymmetric;
      truth_all.insert(truth_all.end(), labels.size(), truth);
    } else {
      all_labelled = false;
    }
    trials.push_back({{"trial_id", r.trial_id},
                      {"class_label", r.class_label ? json(*r.class_label) : json(nullptr)},
                      {"n_strides", labels.size()},
                      {"n_asymmetric", asym},
                      {"strides", std::move(strides)}});
  }

  json j = {{"schema_version", kSchemaVersion},
            {"reference",
             {{"n", range.n},
              {"mean", range.mean},
              {"sd", range.sd},
              {"level", range.level},
              {"interval", a.interval},
              {"ci_low", range.ci_low},
              {"ci_high", range.ci_high}}},
            {"trials", std::move(trials)},
            {"metrics", nullptr},
            {"tool_version", tool_version()}};
  if (all_labelled && !inputs.empty()) {
    const auto m = metrics(predicted_all, truth_all);
    j["metrics"] = {{"tp", m.tp},         {"fp", m.fp},         {"tn", m.tn}, {"fn", m.fn},
                    {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"accuracy", m.accuracy}};
  }
  write_file_atomic(a.out, j.dump(2) + "\n");
}

// cluster --------------------------------------------------------------------

struct ClusterArgs {
  std::string in;
  std::size_t k = 5;
  std::size_t pca_dims = 2;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string plot;
};

void run_cluster(const ClusterArgs& a) {
  const auto reports = load_reports(list_files(a.in, ".json"));
  std::vector<const StrideReport*> strides;
  std::vector<std::string> labels;
  bool all_labelled = true;
  for (const auto& r : reports) {
    for (const auto& s : r.strides) {
      strides.push_back(&s);
      labels.push_back(r.class_label.value_or(""));
    }
    all_labelled = all_labelled && r.class_label.has_value();
  }
  if (strides.empty()) throw Error(ErrorCode::TooFewPoints, "no strides found under '" + a.in + "'");
  const auto len = strides.front()->shape.size();
  Eigen::MatrixXd shapes(static_cast<Eigen::Index>(strides.size()), static_cast<Eigen::Index>(len));
  std::vector<double> sa;
  for (std::size_t i = 0; i < strides.size(); ++i) {
    if (strides[i]->shape.size() != len || len == 0) {
      throw Error(ErrorCode::DimensionMismatch, "stride shapes differ in length");
    }
    shapes.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(strides[i]->shape.data(), static_cast<Eigen::Index>(len));
    sa.push_back(strides[i]->sa);
  }

  ClusterModel model;
  model.pca = pca_fit(shapes, a.pca_dims);
  const Eigen::MatrixXd points = pca_project_rows(model.pca, shapes);
  model.gmm = gmm_fit(points, a.k, resolve_seed(a.seed, 0));
  const auto assign = gmm_predict(model.gmm, points);
  model.symmetric_component = symmetric_component(assign, sa, a.k);
  model.n_strides = strides.size();
  model.tool_version = std::string(tool_version());
  if (all_labelled) {
    model.component_labels = majority_labels(assign, labels, a.k);
    std::vector<std::string> classes = labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::vector<std::size_t> truth;
    for (const auto& l : labels) {
      truth.push_back(static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), l) - classes.begin()));
    }
    model.adjusted_rand_index = adjusted_rand_index(assign, truth);
  } else {
    model.component_labels.assign(a.k, "");
  }
  write_file_atomic(a.out, model_to_json(model));
  if (!a.plot.empty()) write_file_atomic(a.plot, cluster_scatter_svg(points, assign, model.gmm, model.component_labels));
}

// improve --------------------------------------------------------------------

struct ImproveArgs {
  std::string model;
  std::string report;
  std::size_t stride = 0;
  std::string alphas = "0,0.25,0.5,0.75,1";
  std::string out;
  std::string plot;
};

void run_improve(const ImproveArgs& a) {
  const auto model = model_from_json(read_text_file(a.model));
  const auto report = report_from_json(read_text_file(a.report));
  const auto it = std::find_if(report.strides.begin(), report.strides.end(),
                               [&](const StrideReport& s) { return s.index == a.stride; });
  if (it == report.strides.end()) {
    throw Error(ErrorCode::InvalidArgument, "report has no stride with index " + std::to_string(a.stride));
  }
  const Eigen::VectorXd shape = Eigen::Map<const Eigen::VectorXd>(it->shape.data(),
                                                                  static_cast<Eigen::Index>(it->shape.size()));
  const auto point = pca_project(model.pca, shape);
  const auto alphas = parse_alphas(a.alphas);
  const auto stages = improvement_stages(model.pca, point, model.gmm.means[model.symmetric_component], alphas);

  std::string csv = "alpha";
  for (std::size_t d = 0; d < model.pca.k; ++d) csv += ",pc" + std::to_string(d + 1);
  csv += ",t1,t2,sa";
  for (Eigen::Index i = 0; i < model.pca.mean.size(); ++i) csv += ",s" + std::to_string(i);
  csv += '\n';
  for (const auto& st : stages) {
    csv += fmt(st.alpha);
    for (Eigen::Index d = 0; d < st.point.size(); ++d) csv += "," + fmt(st.point(d));
    const std::vector<double> tau(st.shape.data(), st.shape.data() + st.shape.size());
    double t1 = std::nan(""), t2 = std::nan(""), sa = std::nan("");
    try {
      const auto split = split_steps(tau);
      t1 = report.config.swap_feet ? split.t2_pct : split.t1_pct;
      t2 = 100.0 - t1;
      sa = symmetry_angle(t1, t2);
    } catch (const Error&) {
    }
    csv += "," + fmt(t1) + "," + fmt(t2) + "," + fmt(sa);
    for (double v : tau) csv += "," + fmt(v);
    csv += '\n';
  }
  write_file_atomic(a.out, csv);
  if (!a.plot.empty()) write_file_atomic(a.plot, improvement_svg(stages));
}

int exit_code(ErrorCode code) { return code == ErrorCode::IoError ? kExitIo : kExitValidation; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal gait asymmetry analysis of walker-handle torque", "gaitsym"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic trial with ground truth");
  s->add_option("--profile", synth.profile, "Preset name (Sym, RS, LS, RI, LI, LLD2, LLD4) or profile JSON file")
      ->required();
  s->add_option("--duration", synth.duration, "Trial length in seconds")->capture_default_str();
  s->add_option("--seed", synth.seed, "Noise and cadence seed");
  s->add_option("--out", synth.out, "Trial CSV")->required();
  s->add_option("--truth", synth.truth, "Ground-truth JSON sidecar");
  s->add_option("--fs", synth.fs, "Sampling rate in Hz")->capture_default_str();

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Run the decomposition and symmetry pipeline on one trial");
  an->add_option("--in", analyze.in, "Trial CSV")->required();
  an->add_option("--channel", analyze.channel, "Analysis channel")->capture_default_str();
  an->add_option("--out", analyze.out, "Report JSON")->required();
  an->add_option("--strides", analyze.strides, "Per-stride CSV");
  an->add_option("--qq", analyze.qq, "Normal Q-Q pairs of stride SA values (CSV)");
  an->add_option("--label", analyze.label, "Class label stored in the report");
  an->add_option("--trial-id", analyze.trial_id, "Trial identifier (default: input file stem)");
  an->add_flag("--swap-feet", analyze.swap_feet, "Treat the first step of each stride as the right foot");

  CompareArgs compare;
  auto* c = app.add_subcommand("compare", "Paired t-test on per-trial mean SA");
  c->add_option("--a", compare.a, "Report files or directories")->required();
  c->add_option("--b", compare.b, "Report files or directories")->required();
  c->add_option("--out", compare.out, "Result JSON")->required();

  ClassifyArgs classify;
  auto* cl = app.add_subcommand("classify", "Label strides outside the symmetric reference range");
  cl->add_option("--reference", classify.reference, "Symmetric-gait reports or directories")->required();
  cl->add_option("--in", classify.in, "Reports to classify")->required();
  cl->add_option("--out", classify.out, "Result JSON")->required();
  cl->add_option("--level", classify.level, "Reference range coverage")->capture_default_str()->check(
      CLI::Range(0.5, 0.9999));
  cl->add_option("--interval", classify.interval, "range: mean +/- z*sd of strides; sem: mean +/- z*SEM")
      ->capture_default_str()
      ->check(CLI::IsMember({"range", "sem"}));

  ClusterArgs cluster;
  auto* cu = app.add_subcommand("cluster", "PCA + Gaussian mixture clustering of stride shapes");
  cu->add_option("--in", cluster.in, "Directory of report JSON files")->required();
  cu->add_option("--k", cluster.k, "Mixture components")->capture_default_str()->check(CLI::PositiveNumber);
  cu->add_option("--pca-dims", cluster.pca_dims, "Retained PCA dimensions")->capture_default_str()->check(
      CLI::PositiveNumber);
  cu->add_option("--seed", cluster.seed, "Initialization seed");
  cu->add_option("--out", cluster.out, "Model JSON")->required();
  cu->add_option("--plot", cluster.plot, "SVG scatter with covariance ellipses");

  ImproveArgs improve;
  auto* im = app.add_subcommand("improve", "Interpolate a stride toward the symmetric centroid");
  im->add_option("--model", improve.model, "Model JSON from cluster")->required();
  im->add_option("--report", improve.report, "Report JSON holding the stride")->required();
  im->add_option("--stride", improve.stride, "Stride index")->required();
  im->add_option("--alphas", improve.alphas, "Comma-separated interpolation fractions")->capture_default_str();
  im->add_option("--out", improve.out, "Stage CSV")->required();
  im->add_option("--plot", improve.plot, "SVG of the reconstructed strides");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*s) run_synth(synth);
    else if (*an) run_analyze(analyze);
    else if (*c) run_compare(compare);
    else if (*cl) run_classify(classify);
    else if (*cu) run_cluster(cluster);
    else if (*im) run_improve(improve);
  } catch (const Error& e) {
    err << "gaitsym: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "gaitsym: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "gaitsym: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace gaitsym::cli

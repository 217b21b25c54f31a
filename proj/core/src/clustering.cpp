#include "gaitsym/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "gaitsym/error.hpp"
#include "gaitsym/random.hpp"

namespace gaitsym {
namespace {

void require_dimension(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(got) + ", expected " + std::to_string(want));
  }
}

// Constrained ML covariance: eigenvalues below the floor are raised to it.
Eigen::MatrixXd clip_covariance(const Eigen::MatrixXd& cov, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
  Eigen::VectorXd values = eig.eigenvalues().cwiseMax(floor);
  return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

struct Fit {
  GmmModel model;
  double ll = -std::numeric_limits<double>::infinity();
};

// n x K matrix of log(weight_k) + log N(x | mu_k, Sigma_k).
Eigen::MatrixXd weighted_log_densities(const GmmModel& m, const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  const auto d = static_cast<double>(x.cols());
  const auto big_k = static_cast<Eigen::Index>(m.n_components);
  Eigen::MatrixXd out(n, big_k);
  for (Eigen::Index k = 0; k < big_k; ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(m.covariances[k]);
    const Eigen::MatrixXd l = llt.matrixL();
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    const double log_w = m.weights[k] > 0.0 ? std::log(m.weights[k]) : -std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd centered = (x.rowwise() - m.means[k].transpose()).transpose();
    const Eigen::MatrixXd z = llt.matrixL().solve(centered);
    const Eigen::VectorXd maha = z.colwise().squaredNorm().transpose();
    out.col(k) = (log_w - 0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det)) -
                 0.5 * maha.array();
  }
  return out;
}

double e_step(const GmmModel& m, const Eigen::MatrixXd& x, Eigen::MatrixXd& resp) {
  resp = weighted_log_densities(m, x);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < resp.rows(); ++i) {
    const double lse = log_sum_exp(resp.row(i).transpose());
    ll += lse;
    resp.row(i) = (resp.row(i).array() - lse).exp();
  }
  return ll;
}

void m_step(GmmModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& resp, double floor) {
  const auto n = static_cast<double>(x.rows());
  for (std::size_t k = 0; k < m.n_components; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double nk = resp.col(kk).sum();
    m.weights[k] = nk / n;
    if (nk < 1e-12) continue;
    m.means[k] = (x.transpose() * resp.col(kk)) / nk;
    const Eigen::MatrixXd centered = x.rowwise() - m.means[k].transpose();
    const Eigen::MatrixXd cov = (centered.transpose() * resp.col(kk).asDiagonal() * centered) / nk;
    m.covariances[k] = clip_covariance(cov, floor);
  }
}

std::vector<std::size_t> kmeans_plus_plus(const Eigen::MatrixXd& x, std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> centers{rng.index(n)};
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (centers.size() < k) {
    const auto last = x.row(static_cast<Eigen::Index>(centers.back()));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(static_cast<Eigen::Index>(i)) - last).squaredNorm());
      total += d2[i];
    }
    if (total <= 0.0) {
      centers.push_back(rng.index(n));
      continue;
    }
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (acc > target) {
        pick = i;
        break;
      }
    }
    centers.push_back(pick);
  }
  return centers;
}

Fit run_em(const Eigen::MatrixXd& x, std::size_t big_k, Rng& rng, const GmmOptions& opt, double floor,
           const Eigen::MatrixXd& global_cov) {
  Fit fit;
  auto& m = fit.model;
  m.n_components = big_k;
  m.weights.assign(big_k, 1.0 / static_cast<double>(big_k));
  m.covariances.assign(big_k, clip_covariance(global_cov, floor));
  for (auto c : kmeans_plus_plus(x, big_k, rng)) m.means.push_back(x.row(static_cast<Eigen::Index>(c)).transpose());

  Eigen::MatrixXd resp;
  double prev = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double ll = e_step(m, x, resp);
    m.ll_history.push_back(ll);
    m.log_likelihood = ll;
    m.iterations = static_cast<std::size_t>(it + 1);
    if (std::isfinite(prev) && std::abs(ll - prev) <= opt.tolerance * std::abs(ll)) {
      m.converged = true;
      break;
    }
    prev = ll;
    m_step(m, x, resp, floor);
  }
  // Score the final parameters in case the loop ended on an M-step.
  if (!m.converged) {
    m.log_likelihood = e_step(m, x, resp);
    m.ll_history.push_back(m.log_likelihood);
  }
  fit.ll = m.log_likelihood;
  return fit;
}

}  // namespace

PcaModel pca_fit(const Eigen::MatrixXd& shapes, std::size_t k) {
  const auto n = shapes.rows();
  const auto l = shapes.cols();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "PCA needs at least two strides");
  if (k == 0 || k > static_cast<std::size_t>(std::min(n, l))) {
    throw Error(ErrorCode::InvalidArgument, "k must lie in [1, min(n, L)]");
  }
  PcaModel model;
  model.k = k;
  model.mean = shapes.colwise().mean().transpose();
  const Eigen::MatrixXd centered = shapes.rowwise() - model.mean.transpose();
  if (centered.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorCode::RankDeficient, "all strides are identical");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const auto r = std::min<Eigen::Index>(n - 1, l);
  for (Eigen::Index i = 0; i < r; ++i) {
    model.explained_variance.push_back(sv(i) * sv(i) / static_cast<double>(n - 1));
  }
  model.components = svd.matrixV().leftCols(static_cast<Eigen::Index>(k)).transpose();
  // Deterministic sign: the largest-magnitude loading of each component is positive.
  for (Eigen::Index c = 0; c < model.components.rows(); ++c) {
    Eigen::Index arg = 0;
    model.components.row(c).cwiseAbs().maxCoeff(&arg);
    if (model.components(c, arg) < 0.0) model.components.row(c) *= -1.0;
  }
  return model;
}

Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& shape) {
  require_dimension(shape.size(), model.mean.size(), "shape");
  return model.components * (shape - model.mean);
}

Eigen::MatrixXd pca_project_rows(const PcaModel& model, const Eigen::MatrixXd& shapes) {
  require_dimension(shapes.cols(), model.mean.size(), "shape");
  return (shapes.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& point) {
  require_dimension(point.size(), model.components.rows(), "point");
  return model.mean + model.components.transpose() * point;
}

GmmModel gmm_fit(const Eigen::MatrixXd& points, std::size_t n_components, std::uint64_t seed,
                 const GmmOptions& options) {
  if (n_components == 0) throw Error(ErrorCode::InvalidArgument, "need at least one component");
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  if (d == 0 || n < n_components * (d + 1)) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(n) + " points for " + std::to_string(n_components) +
                                             " components in " + std::to_string(d) + " dimensions");
  }
  if (!points.allFinite()) throw Error(ErrorCode::InvalidArgument, "points must be finite");

  const Eigen::RowVectorXd mu = points.colwise().mean();
  const Eigen::MatrixXd centered = points.rowwise() - mu;
  const Eigen::MatrixXd global_cov = centered.transpose() * centered / static_cast<double>(n);
  double mean_var = global_cov.trace() / static_cast<double>(d);
  if (!(mean_var > 0.0)) mean_var = 1.0;
  const double floor = options.floor_scale * mean_var;

  Rng rng(seed);
  Fit best;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    auto fit = run_em(points, n_components, rng, options, floor, global_cov);
    if (fit.ll > best.ll || best.model.means.empty()) best = std::move(fit);
  }
  best.model.seed = seed;
  return best.model;
}

Eigen::MatrixXd gmm_responsibilities(const GmmModel& model, const Eigen::MatrixXd& points) {
  if (!model.means.empty()) require_dimension(points.cols(), model.means.front().size(), "point");
  Eigen::MatrixXd resp;
  e_step(model, points, resp);
  return resp;
}

std::vector<std::size_t> gmm_predict(const GmmModel& model, const Eigen::MatrixXd& points) {
  const auto resp = gmm_responsibilities(model, points);
  std::vector<std::size_t> labels(static_cast<std::size_t>(resp.rows()));
  for (Eigen::Index i = 0; i < resp.rows(); ++i) {
    Eigen::Index arg = 0;
    resp.row(i).maxCoeff(&arg);
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(arg);
  }
  return labels;
}

double gmm_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& points) {
  if (!model.means.empty()) require_dimension(points.cols(), model.means.front().size(), "point");
  Eigen::MatrixXd resp;
  return e_step(model, points, resp);
}

Eigen::VectorXd interpolate_towards(const Eigen::VectorXd& point, const Eigen::VectorXd& centroid, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1]");
  require_dimension(centroid.size(), point.size(), "centroid");
  return (1.0 - alpha) * point + alpha * centroid;
}

Eigen::VectorXd reconstruct_trajectory(const PcaModel& model, const Eigen::VectorXd& p_star) {
  return pca_reconstruct(model, p_star);
}

std::vector<ImprovementStage> improvement_stages(const PcaModel& model, const Eigen::VectorXd& point,
                                                 const Eigen::VectorXd& centroid, std::span<const double> alphas) {
  std::vector<ImprovementStage> stages;
  stages.reserve(alphas.size());
  for (double a : alphas) {
    ImprovementStage s;
    s.alpha = a;
    s.point = interpolate_towards(point, centroid, a);
    s.shape = reconstruct_trajectory(model, s.point);
    stages.push_back(std::move(s));
  }
  return stages;
}

std::size_t symmetric_component(std::span<const std::size_t> assignments, std::span<const double> sa_values,
                                std::size_t n_components) {
  if (assignments.size() != sa_values.size()) throw Error(ErrorCode::LengthMismatch, "assignments vs SA values");
  std::vector<double> sum(n_components, 0.0);
  std::vector<std::size_t> count(n_components, 0);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] >= n_components) throw Error(ErrorCode::InvalidArgument, "assignment out of range");
    sum[assignments[i]] += std::abs(sa_values[i]);
    ++count[assignments[i]];
  }
  std::size_t best = n_components;
  double best_mean = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_components; ++k) {
    if (count[k] == 0) continue;
    const double m = sum[k] / static_cast<double>(count[k]);
    if (m < best_mean) {
      best_mean = m;
      best = k;
    }
  }
  if (best == n_components) throw Error(ErrorCode::TooFewPoints, "no populated component");
  return best;
}

std::vector<std::string> majority_labels(std::span<const std::size_t> assignments,
                                         std::span<const std::string> labels, std::size_t n_components) {
  if (assignments.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "assignments vs labels");
  std::vector<std::map<std::string, std::size_t>> votes(n_components);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] >= n_components) throw Error(ErrorCode::InvalidArgument, "assignment out of range");
    ++votes[assignments[i]][labels[i]];
  }
  std::vector<std::string> out(n_components);
  for (std::size_t k = 0; k < n_components; ++k) {
    std::size_t best = 0;
    for (const auto& [name, c] : votes[k]) {
      if (c > best) {
        best = c;
        out[k] = name;
      }
    }
  }
  return out;
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "partitions differ in length");
  const auto n = static_cast<double>(a.size());
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto pairs = [](double x) { return 0.5 * x * (x - 1.0); };
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, c] : table) index += pairs(c);
  for (const auto& [key, c] : rows) sum_a += pairs(c);
  for (const auto& [key, c] : cols) sum_b += pairs(c);
  const double expected = n > 1.0 ? sum_a * sum_b / pairs(n) : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace gaitsym

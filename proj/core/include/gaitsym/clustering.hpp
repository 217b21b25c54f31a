#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gaitsym {

struct PcaModel {
  Eigen::VectorXd mean;        // length L
  Eigen::MatrixXd components;  // k x L, orthonormal rows
  std::vector<double> explained_variance;  // all min(n-1, L) values, descending
  std::size_t k = 2;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

struct GmmModel {
  std::size_t n_components = 5;
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covariances;
  double log_likelihood = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> ll_history;  // per EM iteration of the kept restart
  std::size_t iterations = 0;
  bool converged = false;
};

struct GmmOptions {
  int restarts = 5;
  int max_iterations = 200;
  double tolerance = 1e-6;  // relative log-likelihood change
  double floor_scale = 1e-6;
};

/// Rows of `shapes` are strides.
PcaModel pca_fit(const Eigen::MatrixXd& shapes, std::size_t k = 2);
Eigen::VectorXd pca_project(const PcaModel& model, const Eigen::VectorXd& shape);
Eigen::MatrixXd pca_project_rows(const PcaModel& model, const Eigen::MatrixXd& shapes);
Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& point);

GmmModel gmm_fit(const Eigen::MatrixXd& points, std::size_t n_components = 5, std::uint64_t seed = 0,
                 const GmmOptions& options = {});
/// n x K responsibilities.
Eigen::MatrixXd gmm_responsibilities(const GmmModel& model, const Eigen::MatrixXd& points);
std::vector<std::size_t> gmm_predict(const GmmModel& model, const Eigen::MatrixXd& points);
double gmm_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& points);

Eigen::VectorXd interpolate_towards(const Eigen::VectorXd& point, const Eigen::VectorXd& centroid, double alpha);
Eigen::VectorXd reconstruct_trajectory(const PcaModel& model, const Eigen::VectorXd& p_star);

struct ImprovementStage {
  double alpha = 0.0;
  Eigen::VectorXd point;
  Eigen::VectorXd shape;
};

std::vector<ImprovementStage> improvement_stages(const PcaModel& model, const Eigen::VectorXd& point,
                                                 const Eigen::VectorXd& centroid, std::span<const double> alphas);

/// Component whose members have the smallest mean |SA|.
std::size_t symmetric_component(std::span<const std::size_t> assignments, std::span<const double> sa_values,
                                std::size_t n_components);

/// Majority class name per component; empty string for components with no members.
std::vector<std::string> majority_labels(std::span<const std::size_t> assignments,
                                         std::span<const std::string> labels, std::size_t n_components);

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace gaitsym

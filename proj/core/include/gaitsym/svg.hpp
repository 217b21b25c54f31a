#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "gaitsym/clustering.hpp"

namespace gaitsym {

/// Scatter of the first two PCA coordinates coloured by component, with one
/// 2-sigma covariance ellipse polyline per component.
std::string cluster_scatter_svg(const Eigen::MatrixXd& points, std::span<const std::size_t> assignments,
                                const GmmModel& gmm, std::span<const std::string> component_labels);

/// One polyline per improvement stage over the normalized stride.
std::string improvement_svg(std::span<const ImprovementStage> stages);

}  // namespace gaitsym

#include "gaitsym/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string_view>

#include "gaitsym/error.hpp"

namespace gaitsym {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 48.0;
constexpr int kEllipseVertices = 72;

constexpr std::array<std::string_view, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string_view colour(std::size_t i) { return kPalette[i % kPalette.size()]; }

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;

  void include(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  void pad() {
    if (x1 - x0 <= 0.0) x0 -= 1.0, x1 += 1.0;
    if (y1 - y0 <= 0.0) y0 -= 1.0, y1 += 1.0;
    const double px = 0.05 * (x1 - x0), py = 0.05 * (y1 - y0);
    x0 -= px, x1 += px, y0 -= py, y1 += py;
  }
  double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2.0 * kMargin); }
  double sy(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2.0 * kMargin); }
};

Frame empty_frame() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, -inf, inf, -inf};
}

std::string open_svg(std::string_view title, std::string_view xlabel, std::string_view ylabel) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<title>" + escape(title) + "</title>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  s += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + num(kWidth - 2 * kMargin) +
       "\" height=\"" + num(kHeight - 2 * kMargin) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
       escape(xlabel) + "</text>\n";
  s += "<text x=\"14\" y=\"" + num(kHeight / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       num(kHeight / 2) + ")\">" + escape(ylabel) + "</text>\n";
  return s;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, std::string_view stroke,
                     std::string_view name) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(pts[i].first) + "," + num(pts[i].second);
  }
  s += "\"><title>" + escape(name) + "</title></polyline>\n";
  return s;
}

}  // namespace

std::string cluster_scatter_svg(const Eigen::MatrixXd& points, std::span<const std::size_t> assignments,
                                const GmmModel& gmm, std::span<const std::string> component_labels) {
  if (points.cols() < 2) throw Error(ErrorCode::DimensionMismatch, "scatter needs two PCA dimensions");
  if (static_cast<std::size_t>(points.rows()) != assignments.size()) {
    throw Error(ErrorCode::LengthMismatch, "one assignment per point required");
  }

  std::vector<std::vector<std::pair<double, double>>> ellipses;
  Frame f = empty_frame();
  for (Eigen::Index i = 0; i < points.rows(); ++i) f.include(points(i, 0), points(i, 1));
  for (std::size_t k = 0; k < gmm.n_components; ++k) {
    const Eigen::Matrix2d cov = gmm.covariances[k].topLeftCorner(2, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    const Eigen::Vector2d radii = 2.0 * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::vector<std::pair<double, double>> ring;
    for (int v = 0; v <= kEllipseVertices; ++v) {
      const double th = 2.0 * std::numbers::pi * v / kEllipseVertices;
      const Eigen::Vector2d p = gmm.means[k].head<2>() + eig.eigenvectors() * Eigen::Vector2d(radii(0) * std::cos(th),
                                                                                                  radii(1) * std::sin(th));
      f.include(p(0), p(1));
      ring.emplace_back(p(0), p(1));
    }
    ellipses.push_back(std::move(ring));
  }
  f.pad();

  std::string s = open_svg("Stride clusters in PCA space", "PC1", "PC2");
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    s += "<circle cx=\"" + num(f.sx(points(i, 0))) + "\" cy=\"" + num(f.sy(points(i, 1))) + "\" r=\"2\" fill=\"" +
         std::string(colour(assignments[static_cast<std::size_t>(i)])) + "\" fill-opacity=\"0.6\"/>\n";
  }
  for (std::size_t k = 0; k < ellipses.size(); ++k) {
    for (auto& p : ellipses[k]) p = {f.sx(p.first), f.sy(p.second)};
    const std::string name = k < component_labels.size() && !component_labels[k].empty()
                                 ? component_labels[k]
                                 : "component " + std::to_string(k);
    s += polyline(ellipses[k], colour(k), name);
  }
  s += "</svg>\n";
  return s;
}

std::string improvement_svg(std::span<const ImprovementStage> stages) {
  Frame f = empty_frame();
  for (const auto& st : stages) {
    for (Eigen::Index i = 0; i < st.shape.size(); ++i) f.include(static_cast<double>(i), st.shape(i));
  }
  f.pad();
  std::string s = open_svg("Stages of gait improvement", "stride sample", "seasonal torque");
  for (std::size_t k = 0; k < stages.size(); ++k) {
    std::vector<std::pair<double, double>> pts;
    for (Eigen::Index i = 0; i < stages[k].shape.size(); ++i) {
      pts.emplace_back(f.sx(static_cast<double>(i)), f.sy(stages[k].shape(i)));
    }
    char name[32];
    std::snprintf(name, sizeof name, "alpha %.2f", stages[k].alpha);
    s += polyline(pts, colour(k), name);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace gaitsym

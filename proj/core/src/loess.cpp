#include "gaitsym/loess.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gaitsym/error.hpp"

namespace gaitsym {
namespace {

// Solves the (degree+1)-square system in place; false when singular.
template <std::size_t N>
bool solve(std::array<std::array<double, N>, N>& a, std::array<double, N>& b, std::size_t dim) {
  double scale = 0.0;
  for (std::size_t i = 0; i < dim; ++i) scale = std::max(scale, std::abs(a[i][i]));
  if (scale <= 0.0) return false;
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < dim; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) <= 1e-10 * scale) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < dim; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < dim; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = dim; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < dim; ++c) s -= a[i][c] * b[c];
    b[i] = s / a[i][i];
  }
  return true;
}

}  // namespace

std::optional<double> loess_at(std::span<const double> x, std::span<const double> y,
                               std::span<const double> robustness, double x0, std::size_t q, int degree) {
  const std::size_t n = x.size();
  if (n == 0 || q == 0) return std::nullopt;
  const std::size_t width = std::min(q, n);

  // Window of `width` nearest points: start from the insertion point and
  // slide until the farther edge cannot be improved.
  auto it = std::lower_bound(x.begin(), x.end(), x0);
  std::size_t centre = static_cast<std::size_t>(it - x.begin());
  std::size_t lo = centre > width / 2 ? centre - width / 2 : 0;
  lo = std::min(lo, n - width);
  while (lo > 0 && x0 - x[lo - 1] < x[lo + width - 1] - x0) --lo;
  while (lo + width < n && x[lo + width] - x0 < x0 - x[lo]) ++lo;
  const std::size_t hi = lo + width - 1;

  double h = std::max(x0 - x[lo], x[hi] - x0);
  if (q > n && n > 1) {
    const double spacing = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
    h += 0.5 * static_cast<double>(q - n) * spacing;
  }

  const double h_in = 0.001 * h;
  const double h_out = 0.999 * h;
  const auto dim = static_cast<std::size_t>(degree + 1);
  std::array<std::array<double, 3>, 3> ata{};
  std::array<double, 3> aty{};
  double wsum = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) {
    const double r = std::abs(x[j] - x0);
    double w = 0.0;
    if (r <= h_out) {
      if (r <= h_in || h <= 0.0) {
        w = 1.0;
      } else {
        const double u = r / h;
        const double t = 1.0 - u * u * u;
        w = t * t * t;
      }
    }
    if (!robustness.empty()) w *= robustness[j];
    if (w <= 0.0) continue;
    wsum += w;
    const double u = h > 0.0 ? (x[j] - x0) / h : 0.0;
    std::array<double, 3> basis{1.0, u, u * u};
    for (std::size_t r0 = 0; r0 < dim; ++r0) {
      aty[r0] += w * basis[r0] * y[j];
      for (std::size_t c = 0; c < dim; ++c) ata[r0][c] += w * basis[r0] * basis[c];
    }
  }
  if (wsum <= 0.0) return std::nullopt;
  if (!solve<3>(ata, aty, dim)) return std::nullopt;
  return aty[0];
}

std::vector<double> loess_smooth(std::span<const double> x, std::span<const double> y, double span, int degree) {
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(ErrorCode::LengthMismatch, "x and y differ in length");
  if (degree != 1 && degree != 2) throw Error(ErrorCode::InvalidArgument, "LOESS degree must be 1 or 2");
  if (!(span > 0.0 && span <= 1.0)) throw Error(ErrorCode::InvalidArgument, "LOESS span must lie in (0, 1]");
  const auto min_points = static_cast<std::size_t>(std::max(3, degree + 1));
  if (n < min_points) throw Error(ErrorCode::InputTooShort, "too few points for LOESS");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) throw Error(ErrorCode::InvalidArgument, "x must be strictly increasing");
  }
  const auto q = static_cast<std::size_t>(std::floor(span * static_cast<double>(n) + 1e-9));
  if (q < static_cast<std::size_t>(degree + 1)) {
    throw Error(ErrorCode::DegenerateNeighborhood, "span covers fewer points than degree + 1");
  }

  std::vector<double> fit(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = loess_at(x, y, {}, x[i], q, degree);
    if (!v) throw Error(ErrorCode::DegenerateNeighborhood, "singular local fit at index " + std::to_string(i));
    fit[i] = *v;
  }
  return fit;
}

}  // namespace gaitsym

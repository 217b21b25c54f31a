#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gaitsym {

/// Tricube-weighted local polynomial fit evaluated at `x0` using the `q`
/// nearest neighbours of `x0` in the sorted abscissae `x`. `robustness`
/// multiplies the tricube weights when non-empty. Returns nullopt when the
/// local normal equations are singular or all weights vanish.
std::optional<double> loess_at(std::span<const double> x, std::span<const double> y,
                               std::span<const double> robustness, double x0, std::size_t q, int degree);

/// LOESS fit at every abscissa. `span` is the neighbourhood fraction of the
/// sample count; `degree` is 1 or 2.
std::vector<double> loess_smooth(std::span<const double> x, std::span<const double> y, double span, int degree);

}  // namespace gaitsym

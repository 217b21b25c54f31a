#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gaitsym/decomposition.hpp"
#include "gaitsym/error.hpp"
#include "gaitsym/loess.hpp"
#include "gaitsym/random.hpp"

using namespace gaitsym;

namespace {

TimeSeries series_of(std::vector<double> x) {
  TimeSeries s;
  s.samples = std::move(x);
  return s;
}

double max_identity_error(const std::vector<double>& y, const DecompositionResult& d) {
  double e = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) e = std::max(e, std::abs(d.trend[i] + d.seasonal[i] + d.residual[i] - y[i]));
  return e;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= n, mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Direct weighted least-squares line at x0 over the q nearest points.
double brute_force_local_line(const std::vector<double>& x, const std::vector<double>& y, double x0, std::size_t q) {
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(x[a] - x0) < std::abs(x[b] - x0); });
  const double h = std::abs(x[idx[q - 1]] - x0);
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t k = 0; k < q; ++k) {
    const auto i = idx[k];
    const double u = std::abs(x[i] - x0) / h;
    const double w = u < 1 ? std::pow(1 - u * u * u, 3) : 0.0;
    sw += w, swx += w * x[i], swy += w * y[i], swxx += w * x[i] * x[i], swxy += w * x[i] * y[i];
  }
  const double slope = (sw * swxy - swx * swy) / (sw * swxx - swx * swx);
  const double icpt = (swy - slope * swx) / sw;
  return icpt + slope * x0;
}

}  // namespace

TEST_CASE("loess reproduces linear and constant data") {
  std::vector<double> x(40), y(40), c(40, 2.5);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.3 * static_cast<double>(i) + 0.01 * static_cast<double>(i * i);
    y[i] = 4.0 - 1.7 * x[i];
  }
  for (double span : {0.1, 0.3, 0.75, 1.0}) {
    const auto fit = loess_smooth(x, y, span, 1);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(fit[i] - y[i]) <= 1e-9);
    const auto flat = loess_smooth(x, c, span, 2);
    for (double v : flat) CHECK(std::abs(v - 2.5) <= 1e-9);
  }
}

TEST_CASE("loess reduces noise on a parabola") {
  Rng rng(8);
  std::vector<double> x(100), y(100);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = -1.0 + 2.0 * static_cast<double>(i) / 99.0;
    y[i] = x[i] * x[i] + 0.1 * rng.normal();
  }
  const auto fit = loess_smooth(x, y, 0.3, 2);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(fit[i] - x[i] * x[i], 2);
  CHECK(std::sqrt(ss / 100.0) < 0.1);
}

TEST_CASE("loess matches a brute-force weighted line") {
  Rng rng(13);
  std::vector<double> x(30), y(30);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i) + 0.3 * rng.uniform();
    y[i] = std::sin(0.4 * x[i]) + 0.2 * rng.normal();
  }
  const auto fit = loess_smooth(x, y, 0.4, 1);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(fit[i] == doctest::Approx(brute_force_local_line(x, y, x[i], 12)).epsilon(1e-9));
}

TEST_CASE("loess input validation") {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 2, 3, 4, 5};
  CHECK_THROWS_AS(loess_smooth(x, std::vector<double>{1, 2}, 0.5, 1), Error);
  CHECK_THROWS_AS(loess_smooth(std::vector<double>{0, 2, 1, 3, 4}, y, 0.5, 1), Error);
  try {
    loess_smooth(x, y, 0.2, 1);
    FAIL("expected DegenerateNeighborhood");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateNeighborhood);
  }
}

TEST_CASE("constant series decomposes into a flat trend") {
  const std::vector<double> y(200, 4.0);
  const auto d = stl_decompose(series_of(y), 20);
  for (std::size_t i = 0; i < y.size(); ++i) {
    CHECK(std::abs(d.seasonal[i]) < 1e-6);
    CHECK(std::abs(d.trend[i] - 4.0) < 1e-6);
    CHECK(std::abs(d.residual[i]) < 1e-6);
  }
}

TEST_CASE("sinusoid plus drift separates into its parts") {
  const std::size_t p = 25;
  std::vector<double> y(20 * p), s(20 * p);
  for (std::size_t i = 0; i < y.size(); ++i) {
    s[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / p);
    y[i] = s[i] + 0.01 * static_cast<double>(i);
  }
  const auto d = stl_decompose(series_of(y), p);
  CHECK(correlation(d.seasonal, s) >= 0.99);
  const double span = 0.01 * static_cast<double>(y.size());
  double c = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) c += d.trend[i] - 0.01 * static_cast<double>(i);
  c /= static_cast<double>(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(d.trend[i] - 0.01 * static_cast<double>(i) - c) < 0.05 * span);
}

TEST_CASE("white noise is routed mostly to the residual") {
  Rng rng(99);
  std::vector<double> y(600);
  for (double& v : y) v = rng.normal();
  const auto d = stl_decompose(series_of(y), 30);
  double ss = 0.0, total = 0.0;
  for (double v : d.seasonal) ss += v * v;
  for (double v : y) total += v * v;
  // A 7-cycle subseries smoother passes well under half of white-noise power.
  CHECK(ss < 0.4 * total);
  CHECK(root_mean_square(d.residual) > root_mean_square(d.seasonal));
}

TEST_CASE("decomposition identity, centering and RMSE hold on random inputs") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t p = 8 + rng.index(20);
    const std::size_t n = p * (3 + rng.index(8)) + rng.index(p);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = std::sin(2 * std::numbers::pi * static_cast<double>(i) / p) * (1 + rng.uniform()) + 0.05 * static_cast<double>(i) * rng.uniform() + rng.normal(0, 0.3);
    }
    const auto d = stl_decompose(series_of(y), p);
    CHECK(d.trend.size() == n);
    CHECK(d.seasonal.size() == n);
    CHECK(d.residual.size() == n);
    CHECK(max_identity_error(y, d) <= 1e-9);
    for (std::size_t start = 0; start + p <= n; start += p) {
      double m = 0.0;
      for (std::size_t i = start; i < start + p; ++i) m += d.seasonal[i];
      CHECK(std::abs(m / static_cast<double>(p)) <= 1e-6);
    }
    CHECK(std::abs(d.rmse - root_mean_square(d.residual)) <= 1e-12);
  }
}

TEST_CASE("decomposing the negated series negates every component") {
  Rng rng(4);
  std::vector<double> y(240), neg(240);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = std::cos(2 * std::numbers::pi * static_cast<double>(i) / 24) + rng.normal(0, 0.2);
    neg[i] = -y[i];
  }
  const auto a = stl_decompose(series_of(y), 24);
  const auto b = stl_decompose(series_of(neg), 24);
  for (std::size_t i = 0; i < y.size(); ++i) {
    CHECK(std::abs(a.trend[i] + b.trend[i]) <= 1e-9);
    CHECK(std::abs(a.seasonal[i] + b.seasonal[i]) <= 1e-9);
    CHECK(std::abs(a.residual[i] + b.residual[i]) <= 1e-9);
  }
}

TEST_CASE("stl_decompose validation") {
  try {
    stl_decompose(series_of(std::vector<double>(30, 1.0)), 20);
    FAIL("expected SeriesTooShortForPeriod");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeriesTooShortForPeriod);
  }
  StlConfig bad;
  bad.seasonal_span_cycles = 6;
  CHECK_THROWS_AS(stl_decompose(series_of(std::vector<double>(100, 1.0)), 10, bad), Error);
}

TEST_CASE("stride weights by closed-form least squares") {
  const std::vector<double> tmpl{0, 1, 2, 1, 0, -1, -2, -1};
  std::vector<double> y;
  std::vector<StrideBounds> bounds;
  for (int s = 0; s < 4; ++s) {
    bounds.emplace_back(y.size(), y.size() + tmpl.size());
    for (double v : tmpl) y.push_back(s == 2 ? 2.0 * v : v);
  }
  const auto w = fit_stride_weights(y, bounds, tmpl);
  REQUIRE(w.weights.size() == 4);
  CHECK(w.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(w.weights[2] - 2.0) <= 1e-9);
  CHECK(w.rmse <= 1e-12);

  // Orthogonal content gives a zero weight.
  const std::vector<double> ortho{1, 1, 1, 1, 1, 1, 1, 1};
  const std::vector<StrideBounds> one{{0, 8}};
  CHECK(fit_stride_weights(ortho, one, tmpl).weights[0] == doctest::Approx(0.0));

  // Linearity in the data.
  auto scaled = y;
  for (double& v : scaled) v *= -3.0;
  const auto ws = fit_stride_weights(scaled, bounds, tmpl);
  for (std::size_t i = 0; i < 4; ++i) CHECK(ws.weights[i] == doctest::Approx(-3.0 * w.weights[i]));
}

TEST_CASE("stride weights resample the template to each stride length") {
  const std::vector<double> tmpl{0, 1, 0, -1, 0};
  std::vector<double> y{0, 0.5, 1, 0.5, 0, -0.5, -1, -0.5, 0};
  const std::vector<StrideBounds> b{{0, 9}};
  const auto w = fit_stride_weights(y, b, tmpl);
  CHECK(w.weights[0] == doctest::Approx(1.0));
  const std::vector<StrideBounds> empty{{3, 3}};
  try {
    fit_stride_weights(y, empty, tmpl);
    FAIL("expected EmptyStride");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyStride);
  }
}

TEST_CASE("seasonal template averages full cycles") {
  const std::vector<double> s{1, 2, 3, 3, 4, 5, 9};
  const auto t = seasonal_template(s, 3);
  CHECK(t == std::vector<double>{2, 3, 4});
}

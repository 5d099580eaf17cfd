#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nilgeom/manifold/classical.hpp"

using namespace nilgeom::manifold;
using std::numbers::pi;

namespace {

Point random_interior(const Chart& chart, std::mt19937& rng) {
  std::uniform_real_distribution<double> angle(0.2, pi - 0.2);
  std::uniform_real_distribution<double> wide(0.2, 2 * pi - 0.2);
  std::uniform_real_distribution<double> flat(-3.0, 3.0);
  Point x(chart.dim());
  if (chart.name() == "euclidean") {
    for (auto& v : x) v = flat(rng);
  } else if (chart.name() == "sphere2") {
    x = {angle(rng), flat(rng)};
  } else {
    x = {angle(rng), angle(rng), wide(rng)};
  }
  return x;
}

std::vector<Chart> catalog_charts() {
  std::vector<Chart> out;
  for (std::size_t n : {2u, 3u, 4u}) out.push_back(catalog("euclidean", {.dim = n}));
  for (double r : {0.5, 1.0, 2.0}) {
    out.push_back(catalog("sphere2", {.radius = r}));
    out.push_back(catalog("sphere3", {.radius = r}));
  }
  return out;
}

}  // namespace

TEST_CASE("catalog rejects bad names and radii") {
  CHECK_THROWS_AS(catalog("torus", {}), std::invalid_argument);
  CHECK_THROWS_AS(catalog("sphere2", {.radius = 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(catalog("sphere3", {.radius = -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(catalog("euclidean", {.dim = 0}), std::invalid_argument);
}

TEST_CASE("domain predicates exclude coordinate singularities") {
  const auto s2 = catalog("sphere2", {.radius = 1.0});
  CHECK_FALSE(s2.contains(Point{0.0, 0.0}));
  CHECK_FALSE(s2.contains(Point{pi, 1.0}));
  CHECK(s2.contains(Point{1.0, -7.0}));
  CHECK_THROWS_AS(s2.christoffel(Point{0.0, 0.0}), ChartDomainError);
  CHECK_THROWS_AS(s2.metric(Point{1.0}), ChartDomainError);
  const auto s3 = catalog("sphere3", {.radius = 1.0});
  CHECK_FALSE(s3.contains(Point{1.0, 1.0, 0.0}));
  CHECK_FALSE(s3.contains(Point{1.0, pi, 1.0}));
  CHECK(s3.contains(Point{1.0, 1.0, 1.0}));
}

TEST_CASE("euclidean Christoffel symbols vanish") {
  const auto e4 = catalog("euclidean", {.dim = 4});
  const Point x{0.3, -1.0, 2.0, 5.0};
  for (double v : e4.christoffel(x).data) CHECK(v == 0.0);
  for (double v : christoffel_from_metric(e4, x).data) CHECK(v == 0.0);
  for (double v : classical_riemann(e4, x).riemann.data) CHECK(v == 0.0);
}

TEST_CASE("sphere2 Christoffel symbols match the Levi-Civita formula") {
  const auto s2 = catalog("sphere2", {.radius = 1.0});
  for (double theta : {0.3, 1.0, 2.0, 2.8}) {
    const Point x{theta, 0.4};
    const auto g = s2.christoffel(x);
    CHECK(g(0, 1, 1) == doctest::Approx(-std::sin(theta) * std::cos(theta)).epsilon(1e-14));
    CHECK(g(1, 0, 1) == doctest::Approx(std::cos(theta) / std::sin(theta)).epsilon(1e-14));
    CHECK(g(1, 1, 0) == g(1, 0, 1));
    CHECK(g(0, 0, 0) == 0.0);
    const auto lc = christoffel_from_metric(s2, x);
    for (std::size_t idx = 0; idx < g.data.size(); ++idx) {
      CHECK(lc.data[idx] == doctest::Approx(g.data[idx]).epsilon(1e-12));
    }
  }
  const auto eq = s2.christoffel(Point{pi / 2, 0.0});
  CHECK(std::abs(eq(0, 1, 1)) < 1e-15);
  CHECK(std::abs(eq(1, 0, 1)) < 1e-15);
}

TEST_CASE("closed-form Christoffel symbols agree with the metric formula on sphere3") {
  std::mt19937 rng(7);
  const auto s3 = catalog("sphere3", {.radius = 2.0});
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_interior(s3, rng);
    const auto g = s3.christoffel(x);
    const auto lc = christoffel_from_metric(s3, x);
    for (std::size_t idx = 0; idx < g.data.size(); ++idx) {
      CHECK(std::abs(lc.data[idx] - g.data[idx]) < 1e-12);
    }
  }
}

TEST_CASE("finite-difference Christoffel symbols match the closed form on sphere2") {
  std::mt19937 rng(11);
  const auto s2 = catalog("sphere2", {.radius = 1.0});
  const auto fd = s2.with_mode(DerivativeMode::kFiniteDifference);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_interior(s2, rng);
    const auto exact = s2.christoffel(x);
    const auto approx = fd.christoffel(x);
    for (std::size_t idx = 0; idx < exact.data.size(); ++idx) {
      CHECK(std::abs(exact.data[idx] - approx.data[idx]) < 1e-6);
    }
  }
}

TEST_CASE("Taylor data of Γ: jets versus finite differences") {
  const auto s3 = catalog("sphere3", {.radius = 1.0});
  const auto fd = s3.with_mode(DerivativeMode::kFiniteDifference);
  const Point x{1.1, 0.7, 2.0};
  const auto exact = s3.christoffel_taylor(x, 2);
  const auto approx = fd.christoffel_taylor(x, 2);
  for (std::size_t idx = 0; idx < exact.size(); ++idx) {
    for (const auto& [e, c] : exact[idx].coeffs) {
      const auto it = approx[idx].coeffs.find(e);
      const double a = it == approx[idx].coeffs.end() ? 0.0 : it->second;
      // Second partials come from nested differences of an already
      // differenced Γ, so they carry roundoff of order 1e-16 / (1e-5 * 1e-8).
      const double tol = nilgeom::weil::total_degree(e) < 2 ? 1e-6 : 2e-3;
      CHECK(std::abs(a - c) < tol);
    }
  }
  CHECK_THROWS_AS(fd.christoffel_taylor(x, 3), std::invalid_argument);
  CHECK(s3.max_christoffel_order() > 2);

  // ∂_θ Γ^θ_φφ = −cos 2θ on the unit 2-sphere.
  const auto s2 = catalog("sphere2", {.radius = 1.0});
  const auto field = s2.christoffel_field(0, 1, 1);
  const int alpha[] = {1, 0};
  CHECK(field.partial(Point{0.9, 0.0}, alpha) == doctest::Approx(-std::cos(1.8)).epsilon(1e-13));
  const int alpha2[] = {2, 0};
  CHECK(field.partial(Point{0.9, 0.0}, alpha2) == doctest::Approx(2 * std::sin(1.8)).epsilon(1e-13));
}

TEST_CASE("constant-curvature oracle values") {
  std::mt19937 rng(3);
  for (double r : {0.5, 1.0, 2.0}) {
    const auto s2 = catalog("sphere2", {.radius = r});
    const auto s3 = catalog("sphere3", {.radius = r});
    for (int trial = 0; trial < 10; ++trial) {
      const auto x2 = random_interior(s2, rng);
      const auto res2 = classical_riemann(s2, x2);
      const double e0[] = {1.0, 0.0}, e1[] = {0.0, 1.0};
      CHECK(sectional_curvature(res2.riemann, s2.metric(x2), e0, e1) ==
            doctest::Approx(1.0 / (r * r)).epsilon(1e-10));
      CHECK(res2.scalar_curvature == doctest::Approx(2.0 / (r * r)).epsilon(1e-10));

      const auto x3 = random_interior(s3, rng);
      const auto res3 = classical_riemann(s3, x3);
      CHECK(res3.scalar_curvature == doctest::Approx(6.0 / (r * r)).epsilon(1e-10));
      // R_ijkl = K (g_ik g_jl − g_il g_jk)
      const auto g = s3.metric(x3);
      const auto low = lower_first_index(res3.riemann, g);
      const double k = 1.0 / (r * r);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
              const double expect = k * (g(i, a) * g(j, b) - g(i, b) * g(j, a));
              CHECK(std::abs(low(i, j, a, b) - expect) < 1e-9 * (1 + std::abs(expect)));
            }
    }
  }
  const auto s3 = catalog("sphere3", {.radius = 2.0});
  CHECK(classical_riemann(s3, Point{1.0, 1.0, 1.0}).scalar_curvature ==
        doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("Riemann symmetries and first Bianchi identity on catalog charts") {
  std::mt19937 rng(5);
  for (const auto& chart : catalog_charts()) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_interior(chart, rng);
      const auto res = classical_riemann(chart, x);
      const auto& r = res.riemann;
      const auto low = lower_first_index(r, chart.metric(x));
      const std::size_t n = chart.dim();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
              CHECK(std::abs(r(i, j, k, l) + r(i, j, l, k)) < 1e-8);
              CHECK(std::abs(low(i, j, k, l) + low(j, i, k, l)) < 1e-8);
              CHECK(std::abs(low(i, j, k, l) - low(k, l, i, j)) < 1e-8);
              CHECK(std::abs(r(i, j, k, l) + r(i, k, l, j) + r(i, l, j, k)) < 1e-8);
            }
    }
  }
}

TEST_CASE("scalar curvature is point independent on constant-curvature charts") {
  std::mt19937 rng(17);
  const auto s3 = catalog("sphere3", {.radius = 0.5});
  double lo = 1e300, hi = -1e300;
  for (int trial = 0; trial < 10; ++trial) {
    const double s = classical_riemann(s3, random_interior(s3, rng)).scalar_curvature;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK((hi - lo) / hi < 1e-8);
}

TEST_CASE("metric-only charts use finite differences") {
  // Unit 2-sphere again, known only through its metric.
  const auto chart = Chart::from_metric(
      "round", 2,
      [](std::span<const double> x) {
        const double s = std::sin(x[0]);
        return std::vector<double>{1.0, 0.0, 0.0, s * s};
      },
      [](std::span<const double> x) { return x[0] > 0.0 && x[0] < pi; });
  CHECK(chart.mode() == DerivativeMode::kFiniteDifference);
  const Point x{1.0, 0.0};
  CHECK(chart.christoffel(x)(0, 1, 1) == doctest::Approx(-std::sin(1.0) * std::cos(1.0)).epsilon(1e-8));
  const auto res = classical_riemann(chart, x);
  CHECK(res.scalar_curvature == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("singular metric is reported") {
  const auto chart = Chart::from_metric(
      "degenerate", 2, [](std::span<const double>) { return std::vector<double>{1.0, 1.0, 1.0, 1.0}; },
      [](std::span<const double>) { return true; });
  CHECK_THROWS_AS(christoffel_from_metric(chart, Point{0.0, 0.0}), std::domain_error);
}

TEST_CASE("oracle JSON carries the index convention") {
  const auto s2 = catalog("sphere2", {.radius = 1.0});
  const auto j = to_json(classical_riemann(s2, Point{1.0, 0.5}));
  CHECK(j["convention"] == "R^i_jkl, lowered-index last two antisymmetric");
  CHECK(j["components"].size() == 16);
  CHECK(j["dim"] == 2);
}

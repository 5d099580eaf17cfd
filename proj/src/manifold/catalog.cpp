#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "nilgeom/manifold/chart.hpp"

namespace nilgeom::manifold {

namespace {

using std::cos;
using std::sin;
using weil::constant_like;

Chart euclidean(std::size_t n) {
  if (n == 0) throw std::invalid_argument("euclidean chart needs dim >= 1");
  auto metric = [n](auto x) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<S> g(n * n, constant_like(x[0], 0.0));
    for (std::size_t i = 0; i < n; ++i) g[i * n + i] = constant_like(x[0], 1.0);
    return g;
  };
  auto christoffel = [n](auto x) {
    using S = std::decay_t<decltype(x[0])>;
    return std::vector<S>(n * n * n, constant_like(x[0], 0.0));
  };
  auto domain = [](std::span<const double> x) {
    for (double v : x) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  };
  return Chart::closed_form("euclidean", n, {{"dim", static_cast<double>(n)}}, metric, christoffel,
                            domain);
}

// (θ, φ), g = r² diag(1, sin²θ).
Chart sphere2(double r) {
  auto metric = [r](auto x) {
    const auto s = sin(x[0]);
    const auto zero = constant_like(x[0], 0.0);
    return std::vector{constant_like(x[0], r * r), zero, zero, r * r * s * s};
  };
  auto christoffel = [](auto x) {
    const auto s = sin(x[0]);
    const auto c = cos(x[0]);
    const auto zero = constant_like(x[0], 0.0);
    const auto cot = c / s;
    // index (i*2 + j)*2 + k
    return std::vector{zero, zero, zero, -(s * c),  // Γ^θ
                       zero, cot, cot, zero};       // Γ^φ
  };
  auto domain = [](std::span<const double> x) {
    return std::isfinite(x[1]) && x[0] > 0.0 && x[0] < std::numbers::pi;
  };
  return Chart::closed_form("sphere2", 2, {{"radius", r}}, metric, christoffel, domain);
}

// Hyperspherical (χ, θ, φ), g = ρ² diag(1, sin²χ, sin²χ sin²θ).
Chart sphere3(double rho) {
  auto metric = [rho](auto x) {
    const auto s1 = sin(x[0]);
    const auto s2 = sin(x[1]);
    const auto zero = constant_like(x[0], 0.0);
    const double q = rho * rho;
    return std::vector{constant_like(x[0], q), zero, zero,
                       zero, q * s1 * s1, zero,
                       zero, zero, q * s1 * s1 * s2 * s2};
  };
  auto christoffel = [](auto x) {
    const auto s1 = sin(x[0]);
    const auto c1 = cos(x[0]);
    const auto s2 = sin(x[1]);
    const auto c2 = cos(x[1]);
    const auto zero = constant_like(x[0], 0.0);
    const auto cot1 = c1 / s1;
    const auto cot2 = c2 / s2;
    std::vector g(27, zero);
    auto at = [&g](std::size_t i, std::size_t j, std::size_t k) -> auto& {
      return g[(i * 3 + j) * 3 + k];
    };
    at(0, 1, 1) = -(s1 * c1);
    at(0, 2, 2) = -(s1 * c1 * s2 * s2);
    at(1, 0, 1) = cot1;
    at(1, 1, 0) = cot1;
    at(1, 2, 2) = -(s2 * c2);
    at(2, 0, 2) = cot1;
    at(2, 2, 0) = cot1;
    at(2, 1, 2) = cot2;
    at(2, 2, 1) = cot2;
    return g;
  };
  auto domain = [](std::span<const double> x) {
    constexpr double pi = std::numbers::pi;
    return x[0] > 0.0 && x[0] < pi && x[1] > 0.0 && x[1] < pi && x[2] > 0.0 && x[2] < 2 * pi;
  };
  return Chart::closed_form("sphere3", 3, {{"radius", rho}}, metric, christoffel, domain);
}

}  // namespace

Chart catalog(std::string_view name, const CatalogParams& params) {
  if (name == "euclidean") return euclidean(params.dim);
  if (name == "sphere2" || name == "sphere3") {
    if (!(params.radius > 0.0) || !std::isfinite(params.radius)) {
      throw std::invalid_argument(fmt::format("{} needs a positive radius, got {}", name,
                                              params.radius));
    }
    return name == "sphere2" ? sphere2(params.radius) : sphere3(params.radius);
  }
  throw std::invalid_argument(
      fmt::format("unknown chart '{}' (expected euclidean, sphere2 or sphere3)", name));
}

}  // namespace nilgeom::manifold

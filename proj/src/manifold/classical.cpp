#include "nilgeom/manifold/classical.hpp"

#include <stdexcept>

namespace nilgeom::manifold {

CurvatureOracleResult classical_riemann(const Chart& chart, std::span<const double> x) {
  chart.require_contains(x);
  const std::size_t n = chart.dim();
  const auto taylor = chart.christoffel_taylor(x, 1);
  auto value = [&](std::size_t i, std::size_t j, std::size_t k, const weil::Exponent& e) {
    const auto& c = taylor[(i * n + j) * n + k].coeffs;
    const auto it = c.find(e);
    return it == c.end() ? 0.0 : it->second;
  };
  const weil::Exponent origin(n, 0);
  auto gamma = [&](std::size_t i, std::size_t j, std::size_t k) { return value(i, j, k, origin); };
  auto d_gamma = [&](std::size_t m, std::size_t i, std::size_t j, std::size_t k) {
    weil::Exponent e(n, 0);
    e[m] = 1;
    return value(i, j, k, e);
  };

  CurvatureOracleResult out;
  out.point.assign(x.begin(), x.end());
  out.riemann = {n, std::vector<double>(n * n * n * n, 0.0)};
  auto& r = out.riemann;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          double v = d_gamma(k, i, l, j) - d_gamma(l, i, k, j);
          for (std::size_t m = 0; m < n; ++m) {
            v += gamma(i, k, m) * gamma(m, l, j) - gamma(i, l, m) * gamma(m, k, j);
          }
          r(i, j, k, l) = v;
        }
      }
    }
  }

  const Eigen::MatrixXd ginv = chart.metric(x).inverse();
  double scalar = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      double ricci = 0.0;
      for (std::size_t i = 0; i < n; ++i) ricci += r(i, j, i, l);
      scalar += ginv(j, l) * ricci;
    }
  }
  out.scalar_curvature = scalar;
  return out;
}

RiemannTensor lower_first_index(const RiemannTensor& r, const Eigen::MatrixXd& g) {
  const std::size_t n = r.n;
  RiemannTensor out{n, std::vector<double>(r.data.size(), 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double v = 0.0;
          for (std::size_t m = 0; m < n; ++m) v += g(i, m) * r(m, j, k, l);
          out(i, j, k, l) = v;
        }
  return out;
}

std::vector<double> contract(const RiemannTensor& r, std::span<const double> a,
                             std::span<const double> b, std::span<const double> c) {
  const std::size_t n = r.n;
  if (a.size() != n || b.size() != n || c.size() != n) {
    throw std::invalid_argument("contract: vector size does not match tensor dimension");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out[i] += r(i, j, k, l) * a[j] * b[k] * c[l];
  return out;
}

double sectional_curvature(const RiemannTensor& r, const Eigen::MatrixXd& g,
                           std::span<const double> u, std::span<const double> v) {
  const auto low = lower_first_index(r, g);
  const std::size_t n = r.n;
  const Eigen::Map<const Eigen::VectorXd> eu(u.data(), static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> ev(v.data(), static_cast<Eigen::Index>(n));
  const double uu = eu.dot(g * eu), vv = ev.dot(g * ev), uv = eu.dot(g * ev);
  const double denom = uu * vv - uv * uv;
  if (denom == 0.0) throw std::domain_error("sectional_curvature: vectors are linearly dependent");
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) num += low(i, j, k, l) * u[i] * v[j] * u[k] * v[l];
  return num / denom;
}

nlohmann::json to_json(const CurvatureOracleResult& result) {
  return {{"point", result.point},
          {"dim", result.riemann.n},
          {"components", result.riemann.data},
          {"scalar_curvature", result.scalar_curvature},
          {"convention", kRiemannConvention}};
}

}  // namespace nilgeom::manifold

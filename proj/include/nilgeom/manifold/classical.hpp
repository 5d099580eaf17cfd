#pragma once

// Coordinate-formula Riemann tensor: the reference the synthetic pipeline is
// checked against.

#include <span>
#include <vector>

#include "json.hpp"
#include "nilgeom/manifold/chart.hpp"

namespace nilgeom::manifold {

/// R^i_jkl stored flat at ((i*n + j)*n + k)*n + l; antisymmetric in (k, l).
struct RiemannTensor {
  std::size_t n = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data[((i * n + j) * n + k) * n + l];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data[((i * n + j) * n + k) * n + l];
  }
};

struct CurvatureOracleResult {
  Point point;
  RiemannTensor riemann;
  double scalar_curvature = 0.0;
};

inline constexpr const char* kRiemannConvention =
    "R^i_jkl, lowered-index last two antisymmetric";

/// R^i_jkl = ∂_k Γ^i_lj − ∂_l Γ^i_kj + Γ^i_km Γ^m_lj − Γ^i_lm Γ^m_kj, with
/// scalar curvature g^jl R^i_jil.
CurvatureOracleResult classical_riemann(const Chart& chart, std::span<const double> x);

/// R_ijkl = g_im R^m_jkl.
RiemannTensor lower_first_index(const RiemannTensor& r, const Eigen::MatrixXd& g);

/// v^i = R^i_jkl a^j b^k c^l.
std::vector<double> contract(const RiemannTensor& r, std::span<const double> a,
                             std::span<const double> b, std::span<const double> c);

/// R(u,v)v·u / (|u|²|v|² − (u·v)²).
double sectional_curvature(const RiemannTensor& r, const Eigen::MatrixXd& g,
                           std::span<const double> u, std::span<const double> v);

nlohmann::json to_json(const CurvatureOracleResult& result);

}  // namespace nilgeom::manifold

#pragma once

// Synthetic curvature against the coordinate formula.

#include <string>
#include <vector>

#include "json.hpp"
#include "nilgeom/manifold/classical.hpp"
#include "nilgeom/sdg/transport.hpp"

namespace nilgeom::sdg {

/// The coordinate counterpart of ℛ(t1,t2)(t3): −R^i_jkl t3^j t1^k t2^l.
/// The sign and slot order were pinned on sphere2 and are asserted on every
/// catalog chart by the tests.
std::vector<double> classical_contraction(const manifold::RiemannTensor& r,
                                          std::span<const double> t1, std::span<const double> t2,
                                          std::span<const double> t3);

/// ℛ(t1,t2)(t3) at a real point, as real components.
std::vector<double> synthetic_curvature(const SyntheticConnection<double>& conn,
                                        std::span<const double> x, std::span<const double> t1,
                                        std::span<const double> t2, std::span<const double> t3);

/// Scalar curvature assembled from synthetic components alone:
/// S = −Σ g^jl ℛ(e_i, e_l)(e_j)^i.
double synthetic_scalar_curvature(const SyntheticConnection<double>& conn,
                                  const manifold::Chart& chart, std::span<const double> x);

struct ComparisonRecord {
  manifold::Point point;
  std::vector<double> synthetic;
  std::vector<double> classical;
  double abs_err = 0.0;
  /// abs_err / max(|classical|_∞, max|R^i_jkl| · |t1|_∞|t2|_∞|t3|_∞), or
  /// abs_err itself when both vanish.
  double rel_err = 0.0;
};

struct ComparisonReport {
  std::string chart;
  std::string mode;
  std::vector<double> t1, t2, t3;
  std::vector<ComparisonRecord> records;

  double max_rel_err() const;
};

/// Synthetic values use the chart's own derivative mode; the classical side
/// always uses the chart's closed form when it has one.
ComparisonRecord compare_curvature(const manifold::Chart& chart, std::span<const double> x,
                                   std::span<const double> t1, std::span<const double> t2,
                                   std::span<const double> t3);

/// Same, with an explicit synthetic connection (for instance a faulted one).
ComparisonRecord compare_curvature(const manifold::Chart& chart,
                                   const SyntheticConnection<double>& conn,
                                   std::span<const double> x, std::span<const double> t1,
                                   std::span<const double> t2, std::span<const double> t3);

ComparisonReport compare_curvature(const manifold::Chart& chart,
                                   const std::vector<manifold::Point>& points,
                                   std::span<const double> t1, std::span<const double> t2,
                                   std::span<const double> t3);

nlohmann::json to_json(const ComparisonReport& report);
/// One row per (point, component).
std::string to_csv(const ComparisonReport& report);

}  // namespace nilgeom::sdg

#pragma once

// Coordinate charts of Riemannian manifolds with metric and Christoffel data.
//
// Catalog charts provide closed-form formulas written once as generic
// callables; evaluating them on jets (float Weil elements) yields exact
// partial derivatives. Charts defined by a metric alone fall back to
// central finite differences.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nilgeom/weil/elementary.hpp"
#include "nilgeom/weil/taylor.hpp"

namespace nilgeom::manifold {

using weil::Jet;
using Point = std::vector<double>;

/// Central-difference step for first derivatives.
inline constexpr double kFirstDerivativeStep = 1e-5;
/// Step of the outer level of nested central differences.
inline constexpr double kSecondDerivativeStep = 1e-4;

enum class DerivativeMode { kClosedForm, kFiniteDifference };

class ChartDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Γ^i_jk, stored flat at (i*n + j)*n + k.
struct Christoffel {
  std::size_t n = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data[(i * n + j) * n + k];
  }
};

class Chart {
 public:
  template <class S>
  using Field = std::function<std::vector<S>(std::span<const S>)>;

  struct Definition {
    std::string name;
    std::size_t dim = 0;
    std::map<std::string, double> params;
    Field<double> metric;        // n*n, row-major
    Field<Jet> metric_jet;       // optional
    Field<double> christoffel;   // optional, n^3
    Field<Jet> christoffel_jet;  // optional
    std::function<bool(std::span<const double>)> domain;
  };

  explicit Chart(Definition def, DerivativeMode mode = DerivativeMode::kClosedForm);

  /// Builds a chart from generic metric and Christoffel callables usable on
  /// both double and Jet coordinates.
  template <class MetricFn, class ChristoffelFn, class DomainFn>
  static Chart closed_form(std::string name, std::size_t dim, std::map<std::string, double> params,
                           MetricFn metric, ChristoffelFn christoffel, DomainFn domain) {
    Definition def;
    def.name = std::move(name);
    def.dim = dim;
    def.params = std::move(params);
    def.metric = [metric](std::span<const double> x) { return metric(x); };
    def.metric_jet = [metric](std::span<const Jet> x) { return metric(x); };
    def.christoffel = [christoffel](std::span<const double> x) { return christoffel(x); };
    def.christoffel_jet = [christoffel](std::span<const Jet> x) { return christoffel(x); };
    def.domain = std::move(domain);
    return Chart(std::move(def));
  }

  /// Extension point: a chart known only through its metric. Christoffel
  /// symbols and their partials come from finite differences.
  static Chart from_metric(std::string name, std::size_t dim, Field<double> metric,
                           std::function<bool(std::span<const double>)> domain);

  const std::string& name() const { return def_->name; }
  std::size_t dim() const { return def_->dim; }
  const std::map<std::string, double>& params() const { return def_->params; }
  DerivativeMode mode() const { return mode_; }
  Chart with_mode(DerivativeMode mode) const;

  bool contains(std::span<const double> x) const;
  /// Throws ChartDomainError naming the chart and point.
  void require_contains(std::span<const double> x) const;

  Eigen::MatrixXd metric(std::span<const double> x) const;
  /// ∂_m g, one matrix per coordinate m.
  std::vector<Eigen::MatrixXd> metric_partials(std::span<const double> x) const;

  Christoffel christoffel(std::span<const double> x) const;

  /// Taylor polynomials of each Γ^i_jk around x up to total degree `order`
  /// (coefficients ∂^α Γ / α!). Finite differences supply order <= 2.
  std::vector<weil::TaylorPolynomial<double>> christoffel_taylor(std::span<const double> x,
                                                                 int order) const;

  /// Γ^i_jk as a smooth field, partials up to the mode's maximal order.
  weil::SmoothField<double> christoffel_field(std::size_t i, std::size_t j, std::size_t k) const;

  /// Maximal derivative order of Γ this chart can supply.
  int max_christoffel_order() const;

 private:
  Chart(std::shared_ptr<const Definition> def, DerivativeMode mode);

  bool closed_form_christoffel() const;
  std::vector<weil::TaylorPolynomial<double>> christoffel_taylor_fd(std::span<const double> x,
                                                                    int order) const;

  std::shared_ptr<const Definition> def_;
  DerivativeMode mode_;
};

struct CatalogParams {
  std::size_t dim = 2;
  double radius = 1.0;
};

/// "euclidean" (dim), "sphere2" (radius, coordinates θ, φ) and "sphere3"
/// (radius ρ, hyperspherical χ, θ, φ). Throws std::invalid_argument for an
/// unknown name or a non-positive radius.
Chart catalog(std::string_view name, const CatalogParams& params);

/// Γ^i_jk = ½ g^il (∂_j g_lk + ∂_k g_lj − ∂_l g_jk).
Christoffel christoffel_from_metric(const Chart& chart, std::span<const double> x);

}  // namespace nilgeom::manifold

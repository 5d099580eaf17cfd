#pragma once

// Connections as sources of Christoffel data at points whose coordinates
// live in a Weil algebra. A point x0 + ε (ε nilpotent) is handled by the
// terminating Taylor expansion of Γ around x0.

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "nilgeom/manifold/chart.hpp"
#include "nilgeom/weil/taylor.hpp"

namespace nilgeom::sdg {

template <class T>
using Elem = weil::WeilElement<T>;
template <class T>
using Vec = std::vector<Elem<T>>;

template <class T>
class ChristoffelSource {
 public:
  virtual ~ChristoffelSource() = default;
  virtual std::size_t dim() const = 0;
  /// Γ^i_jk(x), flat at (i*n + j)*n + k, in the algebra of x.
  virtual Vec<T> evaluate(std::span<const Elem<T>> x) const = 0;
};

/// Γ from a chart. Taylor data at the augmentation point is cached, since a
/// holonomy loop evaluates Γ repeatedly over the same base point.
class ChartChristoffel final : public ChristoffelSource<double> {
 public:
  explicit ChartChristoffel(manifold::Chart chart) : chart_(std::move(chart)) {}

  std::size_t dim() const override { return chart_.dim(); }
  Vec<double> evaluate(std::span<const Elem<double>> x) const override;
  const manifold::Chart& chart() const { return chart_; }

 private:
  struct Cached {
    manifold::Point x0;
    int order = -1;
    std::vector<weil::TaylorPolynomial<double>> taylor;
  };

  manifold::Chart chart_;
  mutable std::mutex mutex_;
  mutable std::shared_ptr<const Cached> cache_;
};

/// Γ^i_jk given as global polynomials in the coordinates. With rational
/// coefficients every identity of the synthetic layer can be checked exactly.
template <class T>
class PolynomialChristoffel final : public ChristoffelSource<T> {
 public:
  PolynomialChristoffel(std::size_t n, std::vector<weil::TaylorPolynomial<T>> polys)
      : n_(n), polys_(std::move(polys)) {
    if (polys_.size() != n_ * n_ * n_) {
      throw std::invalid_argument("PolynomialChristoffel: need n^3 polynomials");
    }
  }

  std::size_t dim() const override { return n_; }

  Vec<T> evaluate(std::span<const Elem<T>> x) const override {
    if (x.size() != n_) throw std::invalid_argument("PolynomialChristoffel: wrong point size");
    weil::MonomialPowers<T> powers(x);
    Vec<T> out;
    out.reserve(polys_.size());
    for (const auto& p : polys_) out.push_back(weil::substitute(p, powers));
    return out;
  }

 private:
  std::size_t n_;
  std::vector<weil::TaylorPolynomial<T>> polys_;
};

template <class T>
class SyntheticConnection {
 public:
  explicit SyntheticConnection(std::shared_ptr<const ChristoffelSource<T>> source,
                               double tol = weil::kDefaultTolerance)
      : source_(std::move(source)), tol_(tol) {
    if (!source_) throw std::invalid_argument("SyntheticConnection: null source");
  }

  std::size_t dim() const { return source_->dim(); }
  double tolerance() const { return tol_; }
  Vec<T> christoffel(std::span<const Elem<T>> x) const { return source_->evaluate(x); }
  const ChristoffelSource<T>& source() const { return *source_; }

  /// Test hook: flips the sign of the correction term in nabla. Every
  /// identity that does not involve the oracle survives this mutation, so
  /// only the oracle comparison can catch it.
  SyntheticConnection with_sign_fault() const {
    SyntheticConnection out = *this;
    out.sign_fault_ = true;
    return out;
  }
  bool sign_fault() const { return sign_fault_; }

 private:
  std::shared_ptr<const ChristoffelSource<T>> source_;
  double tol_;
  bool sign_fault_ = false;
};

SyntheticConnection<double> chart_connection(const manifold::Chart& chart);

}  // namespace nilgeom::sdg

#pragma once

// Composition of smooth functions with nilpotent arguments. Because the
// displacement lies in the nilpotent ideal, the Taylor series terminates and
// the result is exact, not an approximation.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "nilgeom/weil/element.hpp"

namespace nilgeom::weil {

/// Polynomial in `vars` variables, coefficients keyed by exponent vector.
/// Used to carry Taylor data: coeffs[α] = ∂^α f(x) / α!.
template <class T>
struct TaylorPolynomial {
  std::size_t vars = 0;
  std::map<Exponent, T> coeffs;
};

inline long long multi_factorial(std::span<const int> alpha) {
  long long out = 1;
  for (int a : alpha) {
    for (int j = 2; j <= a; ++j) out *= j;
  }
  return out;
}

/// Memoized products eps^α over a fixed tuple of Weil elements.
template <class T>
class MonomialPowers {
 public:
  explicit MonomialPowers(std::span<const WeilElement<T>> eps) : eps_(eps.begin(), eps.end()) {
    if (eps_.empty()) throw std::invalid_argument("MonomialPowers: no arguments");
    for (const auto& e : eps_) {
      if (!(e.spec() == eps_.front().spec())) {
        throw std::invalid_argument("MonomialPowers: arguments live in different algebras");
      }
    }
  }

  const InfinitesimalSpec& spec() const { return eps_.front().spec(); }

  const WeilElement<T>& get(const Exponent& alpha) {
    if (auto it = cache_.find(alpha); it != cache_.end()) return it->second;
    std::size_t i = 0;
    while (i < alpha.size() && alpha[i] == 0) ++i;
    WeilElement<T> value = [&] {
      if (i == alpha.size()) return WeilElement<T>::constant(spec(), ScalarTraits<T>::from_int(1));
      Exponent lower = alpha;
      --lower[i];
      return get(lower) * eps_[i];
    }();
    return cache_.emplace(alpha, std::move(value)).first->second;
  }

 private:
  std::vector<WeilElement<T>> eps_;
  std::map<Exponent, WeilElement<T>> cache_;
};

/// Σ_α poly[α] · eps^α.
template <class T>
WeilElement<T> substitute(const TaylorPolynomial<T>& poly, MonomialPowers<T>& powers) {
  WeilElement<T> out(powers.spec());
  for (const auto& [alpha, c] : poly.coeffs) {
    if (ScalarTraits<T>::is_zero(c)) continue;
    const auto& p = powers.get(alpha);
    if (!p.is_zero()) out += c * p;
  }
  return out;
}

template <class T>
WeilElement<T> substitute(const TaylorPolynomial<T>& poly, std::span<const WeilElement<T>> eps) {
  if (eps.size() != poly.vars) {
    throw std::invalid_argument(
        fmt::format("substitute: {} arguments for a {}-variable polynomial", eps.size(), poly.vars));
  }
  MonomialPowers<T> powers(eps);
  return substitute(poly, powers);
}

/// A smooth scalar field on an open subset of R^dim, known through its
/// partial derivatives up to `max_order`.
template <class T>
struct SmoothField {
  std::size_t dim = 1;
  int max_order = 0;
  /// partial(x, α) = ∂^α f(x).
  std::function<T(std::span<const T>, std::span<const int>)> partial;
};

/// Taylor data of `field` at `x` up to total degree `order`.
template <class T>
TaylorPolynomial<T> taylor_polynomial(const SmoothField<T>& field, std::span<const T> x,
                                      int order) {
  if (order > field.max_order) {
    throw std::invalid_argument(fmt::format(
        "taylor_eval: derivatives up to order {} required, field supplies {}", order,
        field.max_order));
  }
  TaylorPolynomial<T> poly{field.dim, {}};
  for (const auto& alpha : exponents_up_to(field.dim, order)) {
    T value = field.partial(x, alpha);
    if (ScalarTraits<T>::is_zero(value)) continue;
    value /= ScalarTraits<T>::from_int(multi_factorial(alpha));
    poly.coeffs.emplace(alpha, value);
  }
  return poly;
}

/// f(x + ε) = Σ_{|α| ≤ K} ∂^α f(x)/α! · ε^α, where K is the highest total
/// degree surviving in the algebra of ε. Augmentation of the result is f(x).
template <class T>
WeilElement<T> taylor_eval(const SmoothField<T>& field, std::span<const T> x,
                           std::span<const WeilElement<T>> eps, double tol = kDefaultTolerance) {
  if (x.size() != field.dim || eps.size() != field.dim) {
    throw std::invalid_argument(fmt::format("taylor_eval: field has dimension {}, got {} / {}",
                                            field.dim, x.size(), eps.size()));
  }
  std::vector<WeilElement<T>> nil;
  nil.reserve(eps.size());
  for (const auto& e : eps) {
    if (!is_infinitesimal(e, tol)) {
      throw std::domain_error("taylor_eval: displacement is not infinitesimal (augmentation " +
                              ScalarTraits<T>::to_string(e.augmentation()) + ")");
    }
    nil.push_back(e.nilpotent_part());
  }
  const int order = nil.front().spec().max_total_degree();
  return substitute(taylor_polynomial(field, x, order), std::span<const WeilElement<T>>(nil));
}

/// One-variable case with the derivatives f^(j)(a0) listed explicitly.
template <class T>
WeilElement<T> compose_univariate(const WeilElement<T>& a, std::span<const T> derivatives) {
  const int order = a.spec().max_total_degree();
  if (static_cast<int>(derivatives.size()) <= order) {
    throw std::invalid_argument("compose_univariate: not enough derivatives");
  }
  SmoothField<T> field{1, order, [&](std::span<const T>, std::span<const int> alpha) {
                         return derivatives[static_cast<std::size_t>(alpha[0])];
                       }};
  const T x0 = a.augmentation();
  const WeilElement<T> eps = a.nilpotent_part();
  return taylor_eval(field, std::span<const T>(&x0, 1), std::span<const WeilElement<T>>(&eps, 1));
}

}  // namespace nilgeom::weil

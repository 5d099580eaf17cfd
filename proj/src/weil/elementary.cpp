#include "nilgeom/weil/elementary.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nilgeom/weil/taylor.hpp"

namespace nilgeom::weil {

namespace {

// Derivatives f^(j)(x0), j = 0..order.
template <class F>
std::vector<double> derivative_table(int order, F&& nth) {
  std::vector<double> out(static_cast<std::size_t>(order) + 1);
  for (int j = 0; j <= order; ++j) out[static_cast<std::size_t>(j)] = nth(j);
  return out;
}

}  // namespace

Jet sin(const Jet& a) {
  const double x0 = a.augmentation();
  const double s = std::sin(x0), c = std::cos(x0);
  const auto d = derivative_table(a.spec().max_total_degree(), [&](int j) {
    switch (j % 4) {
      case 0: return s;
      case 1: return c;
      case 2: return -s;
      default: return -c;
    }
  });
  return compose_univariate<double>(a, d);
}

Jet cos(const Jet& a) {
  const double x0 = a.augmentation();
  const double s = std::sin(x0), c = std::cos(x0);
  const auto d = derivative_table(a.spec().max_total_degree(), [&](int j) {
    switch (j % 4) {
      case 0: return c;
      case 1: return -s;
      case 2: return -c;
      default: return s;
    }
  });
  return compose_univariate<double>(a, d);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.augmentation());
  const auto d = derivative_table(a.spec().max_total_degree(), [&](int) { return e; });
  return compose_univariate<double>(a, d);
}

Jet sqrt(const Jet& a) {
  const double x0 = a.augmentation();
  if (!(x0 > 0.0)) throw std::domain_error("sqrt of a jet with non-positive augmentation");
  // d^j/dx^j x^{1/2} = (1/2)(1/2 - 1)...(1/2 - j + 1) x^{1/2 - j}
  const auto d = derivative_table(a.spec().max_total_degree(), [&](int j) {
    double coeff = 1.0;
    for (int i = 0; i < j; ++i) coeff *= 0.5 - i;
    return coeff * std::pow(x0, 0.5 - j);
  });
  return compose_univariate<double>(a, d);
}

Jet reciprocal(const Jet& a) {
  const double x0 = a.augmentation();
  if (x0 == 0.0) throw std::domain_error("reciprocal of a non-unit (zero augmentation)");
  // d^j/dx^j x^{-1} = (-1)^j j! x^{-1-j}
  const auto d = derivative_table(a.spec().max_total_degree(), [&](int j) {
    double coeff = (j % 2) ? -1.0 : 1.0;
    for (int i = 2; i <= j; ++i) coeff *= i;
    return coeff * std::pow(x0, -1 - j);
  });
  return compose_univariate<double>(a, d);
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator/(const Jet& a, double b) { return a * (1.0 / b); }
Jet operator/(double a, const Jet& b) { return a * reciprocal(b); }

}  // namespace nilgeom::weil

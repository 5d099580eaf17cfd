#pragma once

// Coefficient rings. Exact rationals are used for algebraic-law checks,
// binary64 for geometry. Float comparisons always take an explicit
// tolerance; exact comparisons ignore it.

#include <cmath>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace nilgeom::weil {

using Rational = boost::multiprecision::cpp_rational;

/// Absolute tolerance used by float-mode equality unless overridden.
inline constexpr double kDefaultTolerance = 1e-12;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static bool is_zero(double v) { return v == 0.0; }
  static bool near_zero(double v, double tol) { return std::abs(v) <= tol; }
  static double magnitude(double v) { return std::abs(v); }
  static double from_int(long long v) { return static_cast<double>(v); }
  /// 17 significant digits.
  static std::string to_string(double v);
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static bool is_zero(const Rational& v) { return v == 0; }
  static bool near_zero(const Rational& v, double /*tol*/) { return v == 0; }
  static double magnitude(const Rational& v) { return std::abs(v.convert_to<double>()); }
  static Rational from_int(long long v) { return Rational(v); }
  /// "p" for integers, "p/q" otherwise.
  static std::string to_string(const Rational& v);
};

/// Always "p/q", the serialized form.
std::string rational_to_fraction(const Rational& v);
/// Accepts "p", "p/q" with optional sign. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

}  // namespace nilgeom::weil

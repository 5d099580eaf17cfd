#include "nilgeom/weil/scalar.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace nilgeom::weil {

std::string ScalarTraits<double>::to_string(double v) { return fmt::format("{:.17g}", v); }

std::string ScalarTraits<Rational>::to_string(const Rational& v) {
  if (denominator(v) == 1) return numerator(v).str();
  return rational_to_fraction(v);
}

std::string rational_to_fraction(const Rational& v) {
  return numerator(v).str() + "/" + denominator(v).str();
}

Rational parse_rational(std::string_view text) {
  using boost::multiprecision::cpp_int;
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw std::invalid_argument(fmt::format("malformed rational \"{}\"", text));
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument(fmt::format("malformed rational \"{}\"", text));
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw std::invalid_argument(fmt::format("malformed rational \"{}\"", text));
      }
    }
    return cpp_int(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const cpp_int den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument(fmt::format("zero denominator in \"{}\"", text));
  return Rational(parse_int(text.substr(0, slash)), den);
}

}  // namespace nilgeom::weil

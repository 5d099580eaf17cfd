#pragma once

// A small calculator over a Weil algebra: integers, generator names,
// + - * (or ·), ^ with a non-negative integer exponent, and parentheses.
// There is deliberately no division.

#include <cstddef>
#include <stdexcept>
#include <string_view>

#include "nilgeom/weil/element.hpp"

namespace nilgeom::weil {

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& what, std::size_t column)
      : std::invalid_argument(what), column_(column) {}
  /// 1-based, counted in characters.
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Generators are named as in default_generator_names; with a single
/// generator both "x" and "x1" are accepted.
WeilElement<Rational> parse_expression(const InfinitesimalSpec& spec, std::string_view text);

}  // namespace nilgeom::weil

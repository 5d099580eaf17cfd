#include "nilgeom/weil/expression.hpp"

#include <cctype>

#include <fmt/format.h>

namespace nilgeom::weil {

namespace {

using Elem = WeilElement<Rational>;

class Parser {
 public:
  Parser(const InfinitesimalSpec& spec, std::string_view text) : spec_(spec), text_(text) {}

  Elem parse() {
    Elem out = sum();
    skip_space();
    if (pos_ < text_.size()) fail(fmt::format("unexpected '{}'", current_char()));
    return out;
  }

 private:
  Elem sum() {
    Elem acc = product();
    for (;;) {
      skip_space();
      if (accept("+")) {
        acc += product();
      } else if (accept("-")) {
        acc -= product();
      } else {
        return acc;
      }
    }
  }

  Elem product() {
    Elem acc = unary();
    for (;;) {
      skip_space();
      if (accept("*") || accept("·")) {
        acc = acc * unary();
      } else {
        return acc;
      }
    }
  }

  Elem unary() {
    skip_space();
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  Elem power() {
    Elem base = atom();
    skip_space();
    if (!accept("^")) return base;
    skip_space();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected a non-negative integer exponent");
    }
    const auto digits = read_digits();
    if (digits.size() > 4) fail("exponent too large");
    return base.pow(static_cast<unsigned>(std::stoul(std::string(digits))));
  }

  Elem atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept("(")) {
      Elem inner = sum();
      skip_space();
      if (!accept(")")) fail(pos_ >= text_.size() ? "missing ')'" : "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Elem::constant(spec_, parse_rational(read_digits()));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      const auto names = default_generator_names(spec_.generators());
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (name == names[i] || (names.size() == 1 && name == "x1")) {
          return Elem::generator(spec_, i);
        }
      }
      pos_ = start;
      fail(fmt::format("unknown generator '{}' for {} (known: {})", name, spec_.to_string(),
                       fmt::join(names, ", ")));
    }
    fail(fmt::format("unexpected '{}'", current_char()));
  }

  std::string_view read_digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  std::string current_char() const {
    std::size_t len = 1;
    while (pos_ + len < text_.size() && (static_cast<unsigned char>(text_[pos_ + len]) & 0xC0) == 0x80) ++len;
    return std::string(text_.substr(pos_, len));
  }

  // Character column: UTF-8 continuation bytes are not counted.
  std::size_t column() const {
    std::size_t col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++col;
    }
    return col;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const auto col = column();
    throw ExpressionError(fmt::format("parse error at column {}: {}", col, what), col);
  }

  const InfinitesimalSpec& spec_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Elem parse_expression(const InfinitesimalSpec& spec, std::string_view text) {
  return Parser(spec, text).parse();
}

}  // namespace nilgeom::weil

#pragma once

// Elements of a Weil algebra k[x_1..x_n]/I, stored as sparse maps from
// exponent vectors to nonzero coefficients. Every stored monomial survives
// the ideal, so the representation is canonical and equality is structural.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "nilgeom/weil/scalar.hpp"
#include "nilgeom/weil/spec.hpp"

namespace nilgeom::weil {

template <class T>
class WeilElement {
 public:
  using Scalar = T;
  using Terms = std::map<Exponent, T>;

  /// The zero element.
  explicit WeilElement(InfinitesimalSpec spec) : spec_(std::move(spec)) {}

  /// Reduces `terms` modulo the ideal and drops zero coefficients.
  WeilElement(InfinitesimalSpec spec, const Terms& terms) : spec_(std::move(spec)) {
    for (const auto& [e, c] : terms) {
      check_exponent(e);
      if (!spec_.vanishes(e) && !ScalarTraits<T>::is_zero(c)) terms_.emplace(e, c);
    }
  }

  static WeilElement constant(const InfinitesimalSpec& spec, const T& c) {
    return monomial(spec, Exponent(spec.generators(), 0), c);
  }

  /// Zero-based generator index.
  static WeilElement generator(const InfinitesimalSpec& spec, std::size_t index) {
    if (index >= spec.generators()) {
      throw std::out_of_range(fmt::format("generator index {} out of range for {} ({} generators)",
                                          index, spec.to_string(), spec.generators()));
    }
    Exponent e(spec.generators(), 0);
    e[index] = 1;
    return monomial(spec, std::move(e), ScalarTraits<T>::from_int(1));
  }

  static WeilElement monomial(const InfinitesimalSpec& spec, Exponent e, const T& c) {
    WeilElement out(spec);
    out.check_exponent(e);
    if (!spec.vanishes(e) && !ScalarTraits<T>::is_zero(c)) out.terms_.emplace(std::move(e), c);
    return out;
  }

  const InfinitesimalSpec& spec() const { return spec_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  T coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? T(0) : it->second;
  }

  /// Constant term; the projection onto the base ring.
  T augmentation() const { return coefficient(Exponent(spec_.generators(), 0)); }

  /// a - augmentation(a), which lies in the nilpotent ideal.
  WeilElement nilpotent_part() const {
    WeilElement out = *this;
    out.terms_.erase(Exponent(spec_.generators(), 0));
    return out;
  }

  WeilElement& operator+=(const WeilElement& o) {
    check_same_spec(o);
    for (const auto& [e, c] : o.terms_) accumulate(terms_, e, c);
    return *this;
  }

  WeilElement& operator-=(const WeilElement& o) {
    check_same_spec(o);
    for (const auto& [e, c] : o.terms_) accumulate(terms_, e, -c);
    return *this;
  }

  WeilElement& operator*=(const WeilElement& o) {
    *this = *this * o;
    return *this;
  }

  WeilElement& operator*=(const T& s) {
    if (ScalarTraits<T>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (ScalarTraits<T>::is_zero(it->second)) it = terms_.erase(it);
      else ++it;
    }
    return *this;
  }

  WeilElement& operator+=(const T& s) {
    accumulate(terms_, Exponent(spec_.generators(), 0), s);
    return *this;
  }

  WeilElement& operator-=(const T& s) {
    accumulate(terms_, Exponent(spec_.generators(), 0), -s);
    return *this;
  }

  friend WeilElement operator+(WeilElement a, const WeilElement& b) { return a += b; }
  friend WeilElement operator-(WeilElement a, const WeilElement& b) { return a -= b; }
  friend WeilElement operator-(WeilElement a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }

  friend WeilElement operator*(const WeilElement& a, const WeilElement& b) {
    a.check_same_spec(b);
    WeilElement out(a.spec_);
    const std::size_t n = a.spec_.generators();
    Exponent sum(n);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < n; ++i) sum[i] = ea[i] + eb[i];
        if (a.spec_.vanishes(sum)) continue;
        accumulate(out.terms_, sum, ca * cb);
      }
    }
    return out;
  }

  friend WeilElement operator*(WeilElement a, const T& s) { return a *= s; }
  friend WeilElement operator*(const T& s, WeilElement a) { return a *= s; }
  friend WeilElement operator+(WeilElement a, const T& s) { return a += s; }
  friend WeilElement operator+(const T& s, WeilElement a) { return a += s; }
  friend WeilElement operator-(WeilElement a, const T& s) { return a -= s; }
  friend WeilElement operator-(const T& s, const WeilElement& a) { return (-a) += s; }

  friend bool operator==(const WeilElement& a, const WeilElement& b) {
    return a.spec_ == b.spec_ && a.terms_ == b.terms_;
  }

  WeilElement pow(unsigned exponent) const {
    WeilElement result = constant(spec_, ScalarTraits<T>::from_int(1));
    WeilElement base = *this;
    while (exponent) {
      if (exponent & 1U) result = result * base;
      exponent >>= 1U;
      if (exponent) base = base * base;
    }
    return result;
  }

 private:
  static void accumulate(Terms& terms, const Exponent& e, const T& c) {
    if (ScalarTraits<T>::is_zero(c)) return;
    auto [it, inserted] = terms.try_emplace(e, c);
    if (inserted) return;
    it->second += c;
    if (ScalarTraits<T>::is_zero(it->second)) terms.erase(it);
  }

  void check_exponent(const Exponent& e) const {
    if (e.size() != spec_.generators()) {
      throw std::invalid_argument(fmt::format("exponent has {} entries, {} expects {}", e.size(),
                                              spec_.to_string(), spec_.generators()));
    }
    for (int v : e) {
      if (v < 0) throw std::invalid_argument("negative exponent");
    }
  }

  void check_same_spec(const WeilElement& o) const {
    if (!(spec_ == o.spec_)) {
      throw std::invalid_argument(
          fmt::format("spec mismatch: {} vs {}", spec_.to_string(), o.spec_.to_string()));
    }
  }

  InfinitesimalSpec spec_;
  Terms terms_;
};

// ---------------------------------------------------------------------------
// Named operations

template <class T>
WeilElement<T> generator(const InfinitesimalSpec& spec, std::size_t index) {
  return WeilElement<T>::generator(spec, index);
}

template <class T>
WeilElement<T> add(const WeilElement<T>& a, const WeilElement<T>& b) {
  return a + b;
}

template <class T>
WeilElement<T> mul(const WeilElement<T>& a, const WeilElement<T>& b) {
  return a * b;
}

template <class T>
WeilElement<T> scale(const T& c, const WeilElement<T>& a) {
  return c * a;
}

template <class T>
T augmentation(const WeilElement<T>& a) {
  return a.augmentation();
}

/// Zero augmentation: exact for rationals, within `tol` for floats.
template <class T>
bool is_infinitesimal(const WeilElement<T>& a, double tol = kDefaultTolerance) {
  return ScalarTraits<T>::near_zero(a.augmentation(), tol);
}

/// Smallest m >= 1 with a^m = 0. Throws std::domain_error unless `a` is
/// infinitesimal.
template <class T>
int nilpotency_order(const WeilElement<T>& a, double tol = kDefaultTolerance) {
  if (!is_infinitesimal(a, tol)) {
    throw std::domain_error("nilpotency_order: element has nonzero augmentation " +
                            ScalarTraits<T>::to_string(a.augmentation()));
  }
  const WeilElement<T> x = a.nilpotent_part();
  WeilElement<T> power = x;
  const int bound = a.spec().max_total_degree() + 1;
  for (int m = 1; m <= bound; ++m) {
    if (power.is_zero()) return m;
    power = power * x;
  }
  // Unreachable: every product of bound factors from the ideal vanishes.
  throw std::logic_error("nilpotency bound exceeded");
}

/// Kock–Lawvere read-off: the unique polynomial (exponent -> coefficient)
/// representing a map out of the infinitesimal object.
template <class T>
std::map<Exponent, T> kl_extract(const WeilElement<T>& f) {
  return f.terms();
}

/// Evaluates a polynomial on the generators of `spec`, i.e. builds the map
/// spec -> R it defines. Uses ring operations only.
template <class T>
WeilElement<T> evaluate_on_generators(const std::map<Exponent, T>& poly,
                                      const InfinitesimalSpec& spec) {
  WeilElement<T> out(spec);
  for (const auto& [e, c] : poly) {
    WeilElement<T> term = WeilElement<T>::constant(spec, c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) term = term * WeilElement<T>::generator(spec, i).pow(static_cast<unsigned>(e[i]));
    }
    out += term;
  }
  return out;
}

/// Image under the quotient map to `target`, which must have the same
/// generators and a larger ideal (a smaller infinitesimal object). This is
/// restriction of functions along the inclusion target ↪ source.
template <class T>
WeilElement<T> restrict_to(const WeilElement<T>& a, const InfinitesimalSpec& target) {
  if (target.generators() != a.spec().generators()) {
    throw std::invalid_argument("restrict_to: generator count mismatch");
  }
  return WeilElement<T>(target, a.terms());
}

/// Embeds `a` into `ambient`, placing its generators at positions
/// [offset, offset + a.generators()).
template <class T>
WeilElement<T> embed(const WeilElement<T>& a, const InfinitesimalSpec& ambient, std::size_t offset) {
  const std::size_t n = a.spec().generators();
  if (offset + n > ambient.generators()) throw std::invalid_argument("embed: out of range");
  typename WeilElement<T>::Terms terms;
  for (const auto& [e, c] : a.terms()) {
    Exponent shifted(ambient.generators(), 0);
    std::copy(e.begin(), e.end(), shifted.begin() + static_cast<std::ptrdiff_t>(offset));
    terms.emplace(std::move(shifted), c);
  }
  return WeilElement<T>(ambient, terms);
}

/// Largest coefficient magnitude.
template <class T>
double max_abs_coefficient(const WeilElement<T>& a) {
  double m = 0.0;
  for (const auto& [e, c] : a.terms()) m = std::max(m, ScalarTraits<T>::magnitude(c));
  return m;
}

template <class T>
bool approx_equal(const WeilElement<T>& a, const WeilElement<T>& b, double tol) {
  if constexpr (ScalarTraits<T>::kExact) {
    return a == b;
  } else {
    return max_abs_coefficient(a - b) <= tol;
  }
}

/// Generator names: "x" for one generator, "x1".."xn" otherwise.
std::vector<std::string> default_generator_names(std::size_t n);

/// Human-readable canonical form, e.g. "1 + x1 + 2*x1*x2^2". Terms appear
/// in graded order; the zero element prints as "0".
template <class T>
std::string to_string(const WeilElement<T>& a, const std::vector<std::string>& names) {
  if (a.is_zero()) return "0";
  std::vector<std::pair<Exponent, T>> terms(a.terms().begin(), a.terms().end());
  std::sort(terms.begin(), terms.end(),
            [](const auto& x, const auto& y) { return graded_less(x.first, y.first); });
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool negative = c < T(0);
    const T mag = negative ? T(-c) : c;
    if (first) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += names.at(i);
      if (e[i] > 1) mono += fmt::format("^{}", e[i]);
    }
    if (mono.empty()) {
      out += ScalarTraits<T>::to_string(mag);
    } else if (mag == T(1)) {
      out += mono;
    } else {
      out += ScalarTraits<T>::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

template <class T>
std::string to_string(const WeilElement<T>& a) {
  return to_string(a, default_generator_names(a.spec().generators()));
}

}  // namespace nilgeom::weil

#pragma once

// Presentations of infinitesimal objects as monomial ideals.
//
// Every object handled here is the spectrum of a Weil algebra
// k[x_1..x_n]/I where I is generated by monomials. The ideal is described
// by a predicate on exponent vectors: `vanishes(e)` is true iff the
// monomial x^e lies in I. All supported ideals are upward closed.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nilgeom::weil {

using Exponent = std::vector<int>;

enum class SpecKind {
  kDk,         // D_k = {x | x^{k+1} = 0}, one generator
  kDOfN,       // D(n): all pairwise products (squares included) vanish
  kDkOfN,      // D_k(n): any product of k+1 generators vanishes
  kPowerDk,    // (D_k)^n: each generator separately has x_i^{k+1} = 0
  kProductDk,  // D_{k_1} x ... x D_{k_n}
  kDInfTrunc,  // D_inf^n truncated at working order K
  kTensor,     // product of two infinitesimal objects (tensor of algebras)
};

class InfinitesimalSpec {
 public:
  static InfinitesimalSpec Dk(int k);
  static InfinitesimalSpec DOfN(int n);
  static InfinitesimalSpec DkOfN(int k, int n);
  static InfinitesimalSpec PowerDk(int k, int n);
  static InfinitesimalSpec ProductDk(std::vector<int> ks);
  static InfinitesimalSpec DInfTrunc(int n, int working_order);
  /// Generators of `first` come before those of `second`.
  static InfinitesimalSpec Tensor(const InfinitesimalSpec& first,
                                  const InfinitesimalSpec& second);

  SpecKind kind() const { return data_->kind; }
  std::size_t generators() const { return data_->n; }
  /// k for Dk / DkOfN / PowerDk, 1 for DOfN, 0 otherwise.
  int k() const { return data_->k; }
  /// Working order of DInfTrunc, 0 otherwise.
  int working_order() const { return data_->working_order; }
  const std::vector<int>& ks() const { return data_->ks; }
  const std::vector<InfinitesimalSpec>& factors() const { return data_->factors; }

  bool vanishes(std::span<const int> exponent) const;
  /// Highest total degree of a surviving monomial.
  int max_total_degree() const;

  std::string to_string() const;

  friend bool operator==(const InfinitesimalSpec& a, const InfinitesimalSpec& b);

 private:
  struct Data {
    SpecKind kind = SpecKind::kDk;
    std::size_t n = 1;
    int k = 0;
    int working_order = 0;
    std::vector<int> ks;
    std::vector<InfinitesimalSpec> factors;
  };
  explicit InfinitesimalSpec(Data d);

  std::shared_ptr<const Data> data_;
};

/// Parses "D", "D_k", "D(n)", "D_k(n)", "(D_k)^n", "Dinf(n,K)" and products
/// "D_a x D_b x ...". Throws std::invalid_argument with a message on failure.
InfinitesimalSpec parse_spec(std::string_view text);

/// All surviving monomials (a basis of the Weil algebra), ordered by total
/// degree, then lexicographically descending.
std::vector<Exponent> basis_monomials(const InfinitesimalSpec& spec);

/// Every exponent vector with `n` entries and total degree <= bound.
std::vector<Exponent> exponents_up_to(std::size_t n, int bound);

/// An exponent e of total degree <= bound with vanishes_large(e) but not
/// vanishes_small(e). Its absence means `small` is contained in `large`.
std::optional<Exponent> containment_counterexample(const InfinitesimalSpec& small,
                                                   const InfinitesimalSpec& large,
                                                   int degree_bound);

/// small ⊆ large, decided by comparing the ideals up to `degree_bound`.
bool spec_contains(const InfinitesimalSpec& small, const InfinitesimalSpec& large,
                   int degree_bound);

/// A monomial surviving in `large` but killed in `small`; proves the
/// containment small ⊆ large is strict.
std::optional<Exponent> strictness_witness(const InfinitesimalSpec& small,
                                           const InfinitesimalSpec& large,
                                           int degree_bound);

int total_degree(std::span<const int> exponent);

/// Display order: total degree ascending, then lexicographically descending
/// (x1 before x2).
bool graded_less(const Exponent& a, const Exponent& b);

}  // namespace nilgeom::weil

#include "nilgeom/weil/spec.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace nilgeom::weil {

namespace {

void require_positive(int value, const char* what) {
  if (value < 1) {
    throw std::invalid_argument(fmt::format("{} must be >= 1, got {}", what, value));
  }
}

}  // namespace

InfinitesimalSpec::InfinitesimalSpec(Data d) : data_(std::make_shared<const Data>(std::move(d))) {}

InfinitesimalSpec InfinitesimalSpec::Dk(int k) {
  require_positive(k, "k");
  return InfinitesimalSpec(Data{SpecKind::kDk, 1, k, 0, {}, {}});
}

InfinitesimalSpec InfinitesimalSpec::DOfN(int n) {
  require_positive(n, "n");
  if (n == 1) return Dk(1);
  return InfinitesimalSpec(Data{SpecKind::kDOfN, static_cast<std::size_t>(n), 1, 0, {}, {}});
}

InfinitesimalSpec InfinitesimalSpec::DkOfN(int k, int n) {
  require_positive(k, "k");
  require_positive(n, "n");
  if (n == 1) return Dk(k);
  if (k == 1) return DOfN(n);
  return InfinitesimalSpec(Data{SpecKind::kDkOfN, static_cast<std::size_t>(n), k, 0, {}, {}});
}

InfinitesimalSpec InfinitesimalSpec::PowerDk(int k, int n) {
  require_positive(k, "k");
  require_positive(n, "n");
  if (n == 1) return Dk(k);
  return InfinitesimalSpec(Data{SpecKind::kPowerDk, static_cast<std::size_t>(n), k, 0, {}, {}});
}

InfinitesimalSpec InfinitesimalSpec::ProductDk(std::vector<int> ks) {
  if (ks.empty()) throw std::invalid_argument("product needs at least one factor");
  for (int k : ks) require_positive(k, "k");
  if (ks.size() == 1) return Dk(ks.front());
  const auto n = ks.size();
  return InfinitesimalSpec(Data{SpecKind::kProductDk, n, 0, 0, std::move(ks), {}});
}

InfinitesimalSpec InfinitesimalSpec::DInfTrunc(int n, int working_order) {
  require_positive(n, "n");
  require_positive(working_order, "K");
  return InfinitesimalSpec(
      Data{SpecKind::kDInfTrunc, static_cast<std::size_t>(n), 0, working_order, {}, {}});
}

InfinitesimalSpec InfinitesimalSpec::Tensor(const InfinitesimalSpec& first,
                                            const InfinitesimalSpec& second) {
  return InfinitesimalSpec(Data{SpecKind::kTensor, first.generators() + second.generators(), 0,
                                0, {}, {first, second}});
}

bool InfinitesimalSpec::vanishes(std::span<const int> e) const {
  const Data& d = *data_;
  switch (d.kind) {
    case SpecKind::kDk:
      return e[0] > d.k;
    case SpecKind::kDOfN:
      return total_degree(e) > 1;
    case SpecKind::kDkOfN:
      return total_degree(e) > d.k;
    case SpecKind::kDInfTrunc:
      return total_degree(e) > d.working_order;
    case SpecKind::kPowerDk:
      return std::any_of(e.begin(), e.end(), [&](int x) { return x > d.k; });
    case SpecKind::kProductDk:
      for (std::size_t i = 0; i < d.n; ++i) {
        if (e[i] > d.ks[i]) return true;
      }
      return false;
    case SpecKind::kTensor: {
      const auto split = d.factors[0].generators();
      return d.factors[0].vanishes(e.first(split)) || d.factors[1].vanishes(e.subspan(split));
    }
  }
  return false;
}

int InfinitesimalSpec::max_total_degree() const {
  const Data& d = *data_;
  switch (d.kind) {
    case SpecKind::kDk:
    case SpecKind::kDkOfN:
      return d.k;
    case SpecKind::kDOfN:
      return 1;
    case SpecKind::kDInfTrunc:
      return d.working_order;
    case SpecKind::kPowerDk:
      return static_cast<int>(d.n) * d.k;
    case SpecKind::kProductDk:
      return std::accumulate(d.ks.begin(), d.ks.end(), 0);
    case SpecKind::kTensor:
      return d.factors[0].max_total_degree() + d.factors[1].max_total_degree();
  }
  return 0;
}

std::string InfinitesimalSpec::to_string() const {
  const Data& d = *data_;
  switch (d.kind) {
    case SpecKind::kDk:
      return d.k == 1 ? "D" : fmt::format("D_{}", d.k);
    case SpecKind::kDOfN:
      return fmt::format("D({})", d.n);
    case SpecKind::kDkOfN:
      return fmt::format("D_{}({})", d.k, d.n);
    case SpecKind::kPowerDk:
      return fmt::format("(D_{})^{}", d.k, d.n);
    case SpecKind::kDInfTrunc:
      return fmt::format("Dinf({},{})", d.n, d.working_order);
    case SpecKind::kProductDk: {
      std::string out;
      for (std::size_t i = 0; i < d.ks.size(); ++i) {
        if (i) out += "xD";
        else out += "D";
        if (d.ks[i] != 1) out += fmt::format("_{}", d.ks[i]);
      }
      return out;
    }
    case SpecKind::kTensor:
      return fmt::format("[{}]x[{}]", d.factors[0].to_string(), d.factors[1].to_string());
  }
  return {};
}

bool operator==(const InfinitesimalSpec& a, const InfinitesimalSpec& b) {
  if (a.data_ == b.data_) return true;
  const auto& x = *a.data_;
  const auto& y = *b.data_;
  return x.kind == y.kind && x.n == y.n && x.k == y.k && x.working_order == y.working_order &&
         x.ks == y.ks && x.factors == y.factors;
}

int total_degree(std::span<const int> exponent) {
  return std::accumulate(exponent.begin(), exponent.end(), 0);
}

bool graded_less(const Exponent& a, const Exponent& b) {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return b < a;
}

std::vector<Exponent> exponents_up_to(std::size_t n, int bound) {
  std::vector<Exponent> out;
  Exponent current(n, 0);
  // Depth-first over positions, tracking the remaining degree budget.
  auto recurse = [&](auto&& self, std::size_t pos, int budget) -> void {
    if (pos == n) {
      out.push_back(current);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      current[pos] = v;
      self(self, pos + 1, budget - v);
    }
    current[pos] = 0;
  };
  recurse(recurse, 0, bound);
  return out;
}

std::vector<Exponent> basis_monomials(const InfinitesimalSpec& spec) {
  auto all = exponents_up_to(spec.generators(), spec.max_total_degree());
  std::erase_if(all, [&](const Exponent& e) { return spec.vanishes(e); });
  std::sort(all.begin(), all.end(), graded_less);
  return all;
}

std::optional<Exponent> containment_counterexample(const InfinitesimalSpec& small,
                                                   const InfinitesimalSpec& large,
                                                   int degree_bound) {
  if (small.generators() != large.generators()) {
    throw std::invalid_argument(fmt::format("generator count mismatch: {} has {}, {} has {}",
                                            small.to_string(), small.generators(),
                                            large.to_string(), large.generators()));
  }
  for (const auto& e : exponents_up_to(small.generators(), degree_bound)) {
    if (large.vanishes(e) && !small.vanishes(e)) return e;
  }
  return std::nullopt;
}

bool spec_contains(const InfinitesimalSpec& small, const InfinitesimalSpec& large,
                   int degree_bound) {
  return !containment_counterexample(small, large, degree_bound).has_value();
}

std::optional<Exponent> strictness_witness(const InfinitesimalSpec& small,
                                           const InfinitesimalSpec& large, int degree_bound) {
  return containment_counterexample(large, small, degree_bound);
}

// ---------------------------------------------------------------------------
// Spec-string parser

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  InfinitesimalSpec parse() {
    std::vector<InfinitesimalSpec> atoms{atom()};
    skip_space();
    while (!done() && peek() == 'x') {
      ++pos_;
      atoms.push_back(atom());
      skip_space();
    }
    if (!done()) fail("unexpected trailing input");
    if (atoms.size() == 1) return atoms.front();
    const bool all_single = std::all_of(atoms.begin(), atoms.end(), [](const auto& s) {
      return s.kind() == SpecKind::kDk;
    });
    if (all_single) {
      std::vector<int> ks;
      for (const auto& s : atoms) ks.push_back(s.k());
      return InfinitesimalSpec::ProductDk(std::move(ks));
    }
    InfinitesimalSpec acc = atoms.front();
    for (std::size_t i = 1; i < atoms.size(); ++i) acc = InfinitesimalSpec::Tensor(acc, atoms[i]);
    return acc;
  }

 private:
  InfinitesimalSpec atom() {
    skip_space();
    if (accept('(')) {
      expect('D');
      expect('_');
      const int k = integer();
      expect(')');
      expect('^');
      const int n = integer();
      return InfinitesimalSpec::PowerDk(k, n);
    }
    expect('D');
    if (text_.substr(pos_).starts_with("inf")) {
      pos_ += 3;
      expect('(');
      const int n = integer();
      expect(',');
      const int order = integer();
      expect(')');
      return InfinitesimalSpec::DInfTrunc(n, order);
    }
    std::optional<int> k;
    if (accept('_')) k = integer();
    if (accept('(')) {
      const int n = integer();
      expect(')');
      return k ? InfinitesimalSpec::DkOfN(*k, n) : InfinitesimalSpec::DOfN(n);
    }
    return InfinitesimalSpec::Dk(k.value_or(1));
  }

  int integer() {
    skip_space();
    const auto start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  bool accept(char c) {
    skip_space();
    if (!done() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }
  void skip_space() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(
        fmt::format("invalid spec \"{}\" at column {}: {}", text_, pos_ + 1, what));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

InfinitesimalSpec parse_spec(std::string_view text) { return SpecParser(text).parse(); }

}  // namespace nilgeom::weil

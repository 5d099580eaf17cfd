#include "nilgeom/sdg/microlinearity.hpp"

#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "nilgeom/weil/taylor.hpp"

namespace nilgeom::sdg {

namespace {

using weil::Exponent;
using weil::InfinitesimalSpec;
using RElem = weil::WeilElement<Rational>;

const InfinitesimalSpec kD = InfinitesimalSpec::Dk(1);
const InfinitesimalSpec kD2 = InfinitesimalSpec::DOfN(2);
const InfinitesimalSpec kDxD = InfinitesimalSpec::PowerDk(1, 2);

// f ∘ ι for ι: D → D(2), d ↦ (d,0) (axis 0) or (0,d) (axis 1).
RElem pull_back(const RElem& f, int axis) {
  const RElem d = RElem::generator(kD, 0);
  const RElem zero(kD);
  const std::vector<RElem> args = axis == 0 ? std::vector{d, zero} : std::vector{zero, d};
  weil::MonomialPowers<Rational> powers(args);
  return weil::substitute(weil::TaylorPolynomial<Rational>{2, f.terms()}, powers);
}

struct Solution {
  int rank = 0;
  bool consistent = true;
  std::vector<Rational> x;
};

// Gauss–Jordan elimination over the rationals.
Solution solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size(), cols = a.empty() ? 0 : a.front().size();
  Solution s;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    const Rational inv = Rational(1) / a[r][c];
    for (auto& v : a[r]) v *= inv;
    b[r] *= inv;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r || a[q][c] == 0) continue;
      const Rational f = a[q][c];
      for (std::size_t k = 0; k < cols; ++k) a[q][k] -= f * a[r][k];
      b[q] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  s.rank = static_cast<int>(r);
  for (std::size_t q = r; q < rows; ++q) {
    if (b[q] != 0) s.consistent = false;
  }
  s.x.assign(cols, Rational(0));
  for (std::size_t i = 0; i < pivot_col.size(); ++i) s.x[pivot_col[i]] = b[i];
  return s;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  return Rational(num(rng), den(rng));
}

RElem random_on_d(std::mt19937_64& rng, const Rational& at_zero) {
  return RElem::constant(kD, at_zero) + random_rational(rng) * RElem::generator(kD, 0);
}

}  // namespace

bool MicrolinearityReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::optional<RElem> glue_axes(const RElem& g1, const RElem& g2) {
  if (!(g1.spec() == kD) || !(g2.spec() == kD)) {
    throw std::invalid_argument("glue_axes: both maps must live on D");
  }
  const auto basis = weil::basis_monomials(kD2);
  const auto targets = weil::basis_monomials(kD);
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (int axis = 0; axis < 2; ++axis) {
    const RElem& g = axis == 0 ? g1 : g2;
    for (const auto& t : targets) {
      std::vector<Rational> row;
      for (const auto& e : basis) {
        row.push_back(pull_back(RElem::monomial(kD2, e, Rational(1)), axis).coefficient(t));
      }
      a.push_back(std::move(row));
      b.push_back(g.coefficient(t));
    }
  }
  const auto s = solve(std::move(a), std::move(b));
  if (!s.consistent) return std::nullopt;
  if (s.rank != static_cast<int>(basis.size())) {
    throw std::logic_error("glue_axes: coefficient system is not uniquely solvable");
  }
  typename RElem::Terms terms;
  for (std::size_t i = 0; i < basis.size(); ++i) terms.emplace(basis[i], s.x[i]);
  return RElem(kD2, terms);
}

MicrolinearityReport microlinearity_checks(std::size_t dim, int trials, std::uint64_t seed) {
  MicrolinearityReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const auto nd = weil::basis_monomials(kD).size();
  const auto nd2 = weil::basis_monomials(kD2).size();
  const auto ndd = weil::basis_monomials(kDxD).size();
  add("coefficient_counts", nd == 2 && nd2 == 3 && ndd == 4,
      fmt::format("D: {}, D(2): {}, DxD: {}", nd, nd2, ndd));

  // A map on D×D is exactly 1, d1, d2, d1d2 with no other survivors.
  {
    bool ok = true;
    for (const auto& e : weil::exponents_up_to(2, 4)) {
      const bool survives = !kDxD.vanishes(e);
      ok = ok && survives == (e[0] <= 1 && e[1] <= 1);
    }
    add("square_monomials", ok, "surviving monomials on DxD are 1, d1, d2, d1*d2");
  }

  std::mt19937_64 rng(seed);
  {
    const RElem example(kDxD, {{{0, 0}, 3}, {{1, 0}, 1}, {{0, 1}, -2}, {{1, 1}, 7}});
    const RElem expected(kD2, {{{0, 0}, 3}, {{1, 0}, 1}, {{0, 1}, -2}});
    bool ok = weil::restrict_to(example, kD2) == expected;
    for (int t = 0; t < trials && ok; ++t) {
      typename RElem::Terms terms;
      for (const auto& e : weil::basis_monomials(kDxD)) terms.emplace(e, random_rational(rng));
      const RElem f(kDxD, terms);
      const RElem r = weil::restrict_to(f, kD2);
      auto kept = terms;
      kept.erase(Exponent{1, 1});
      ok = r == RElem(kD2, kept) && r.size() + (terms.at({1, 1}) != 0 ? 1 : 0) == f.size();
    }
    add("restriction_forgets_d1d2", ok,
        "restricting DxD to D(2) drops exactly the d1*d2 coefficient");
  }

  {
    const RElem g1 = RElem::constant(kD, 3) + RElem::generator(kD, 0);
    const RElem g2 = RElem::constant(kD, 3) - 2 * RElem::generator(kD, 0);
    const auto glued = glue_axes(g1, g2);
    const RElem expected(kD2, {{{0, 0}, 3}, {{1, 0}, 1}, {{0, 1}, -2}});
    bool ok = glued && *glued == expected;
    int solved = 0;
    for (int t = 0; t < trials && ok; ++t) {
      for (std::size_t i = 0; i < dim && ok; ++i) {
        const Rational base = random_rational(rng);
        const RElem a = random_on_d(rng, base), b = random_on_d(rng, base);
        const auto f = glue_axes(a, b);
        ok = f && pull_back(*f, 0) == a && pull_back(*f, 1) == b;
        ++solved;
      }
    }
    add("pullback_uniqueness", ok,
        fmt::format("{} coordinate pairs glued to unique D(2) maps", solved));
  }

  {
    bool ok = true;
    for (int t = 0; t < trials && ok; ++t) {
      const Rational base = random_rational(rng);
      const RElem a = random_on_d(rng, base), b = random_on_d(rng, base + 1);
      ok = !glue_axes(a, b).has_value();
    }
    add("incompatible_pairs_rejected", ok, "pairs disagreeing at 0 admit no D(2) map");
  }
  return report;
}

nlohmann::json to_json(const MicrolinearityReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"all_passed", report.all_passed()}, {"checks", std::move(checks)}};
}

}  // namespace nilgeom::sdg

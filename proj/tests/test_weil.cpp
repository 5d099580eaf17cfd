#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "nilgeom/weil/element.hpp"
#include "nilgeom/weil/elementary.hpp"
#include "nilgeom/weil/serialization.hpp"
#include "nilgeom/weil/taylor.hpp"

using namespace nilgeom::weil;

namespace {

using Q = Rational;
using Poly = std::map<Exponent, Q>;

// Plain polynomial product with no truncation.
Poly untruncated_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

WeilElement<Q> q_gen(const InfinitesimalSpec& s, std::size_t i) { return WeilElement<Q>::generator(s, i); }
WeilElement<Q> q_const(const InfinitesimalSpec& s, long long c) {
  return WeilElement<Q>::constant(s, Q(c));
}

}  // namespace

TEST_CASE("generators obey the defining relations") {
  SUBCASE("D_2: x^3 = 0, x^2 survives") {
    const auto s = InfinitesimalSpec::Dk(2);
    const auto x = q_gen(s, 0);
    CHECK_FALSE((x * x).is_zero());
    CHECK((x * x * x).is_zero());
  }
  SUBCASE("D(2): x2^2 = 0 and x1 x2 = 0") {
    const auto s = InfinitesimalSpec::DOfN(2);
    const auto x1 = q_gen(s, 0), x2 = q_gen(s, 1);
    CHECK((x2 * x2).is_zero());
    CHECK((x1 * x2).is_zero());
    CHECK_FALSE(x2.is_zero());
  }
  SUBCASE("D_1(3): degree-one monomial survives") {
    const auto s = InfinitesimalSpec::DkOfN(1, 3);
    const auto x3 = q_gen(s, 2);
    CHECK(x3.size() == 1);
    CHECK(x3.coefficient({0, 0, 1}) == 1);
  }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(q_gen(InfinitesimalSpec::DOfN(2), 2), std::out_of_range);
  }
}

TEST_CASE("multiplication reduces modulo the ideal") {
  const auto d = InfinitesimalSpec::Dk(1);
  CHECK((q_gen(d, 0) * q_gen(d, 0)).is_zero());

  const auto d3 = InfinitesimalSpec::Dk(3);
  const auto x = q_gen(d3, 0);
  const auto x2 = x * x;
  CHECK((x2 * x2).is_zero());
  CHECK((x * x2) == WeilElement<Q>::monomial(d3, {3}, Q(1)));

  CHECK_THROWS_AS(q_gen(d, 0) * q_gen(d3, 0), std::invalid_argument);
}

TEST_CASE("augmentation reads the constant term") {
  const auto s = InfinitesimalSpec::DkOfN(2, 2);
  const auto x1 = q_gen(s, 0), x2 = q_gen(s, 1);
  const auto a = q_const(s, 3) + Q(2) * x1 + Q(5) * x1 * x2;
  CHECK(augmentation(a) == 3);
  CHECK(augmentation(x2) == 0);
}

TEST_CASE("augmentation agrees with untruncated multiplication") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coeff(-6, 6), deg(0, 3);
  const auto s = InfinitesimalSpec::DkOfN(3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    Poly pa, pb;
    for (int t = 0; t < 5; ++t) {
      pa[{deg(rng), deg(rng), 0}] += coeff(rng);
      pb[{0, deg(rng), deg(rng)}] += coeff(rng);
    }
    std::erase_if(pa, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(pb, [](const auto& kv) { return kv.second == 0; });
    const WeilElement<Q> a(s, pa), b(s, pb);
    const Poly full = untruncated_mul(pa, pb);
    const Exponent zero{0, 0, 0};
    const Q expected = full.count(zero) ? full.at(zero) : Q(0);
    CHECK(augmentation(a * b) == expected);
    CHECK(augmentation(a * b) == augmentation(a) * augmentation(b));
    CHECK(augmentation(a + b) == augmentation(a) + augmentation(b));
    // Reducing the untruncated product gives the same element.
    CHECK(WeilElement<Q>(s, full) == a * b);
  }
}

TEST_CASE("is_infinitesimal") {
  const auto s = InfinitesimalSpec::DOfN(2);
  const auto x1 = q_gen(s, 0), x2 = q_gen(s, 1);
  CHECK(is_infinitesimal(x1 + x1 * x2));
  CHECK_FALSE(is_infinitesimal(q_const(s, 1) + x1));
  CHECK(is_infinitesimal(WeilElement<Q>(s)));

  const auto f = InfinitesimalSpec::Dk(2);
  const auto tiny = WeilElement<double>::constant(f, 1e-14) + WeilElement<double>::generator(f, 0);
  CHECK(is_infinitesimal(tiny));
  CHECK_FALSE(is_infinitesimal(tiny, 0.0));
}

TEST_CASE("nilpotency order") {
  CHECK(nilpotency_order(q_gen(InfinitesimalSpec::Dk(3), 0)) == 4);

  const auto d2 = InfinitesimalSpec::DOfN(2);
  CHECK(nilpotency_order(q_gen(d2, 0) + q_gen(d2, 1)) == 2);

  // Oracle: expand (x1 + x2)^m without truncation and find the first m for
  // which every monomial has total degree > 2.
  int oracle = 0;
  Poly power{{{0, 0}, Q(1)}};
  const Poly sum{{{1, 0}, Q(1)}, {{0, 1}, Q(1)}};
  for (int m = 1; m < 10 && !oracle; ++m) {
    power = untruncated_mul(power, sum);
    bool all_high = true;
    for (const auto& [e, c] : power) all_high = all_high && total_degree(e) > 2;
    if (all_high) oracle = m;
  }
  REQUIRE(oracle == 3);
  const auto s = InfinitesimalSpec::DkOfN(2, 2);
  CHECK(nilpotency_order(q_gen(s, 0) + q_gen(s, 1)) == oracle);

  CHECK_THROWS_AS(nilpotency_order(q_const(s, 1) + q_gen(s, 0)), std::domain_error);
  CHECK(nilpotency_order(WeilElement<Q>(s)) == 1);
}

TEST_CASE("spec containment") {
  using S = InfinitesimalSpec;
  CHECK(spec_contains(S::DkOfN(2, 3), S::PowerDk(2, 3), 7));
  CHECK(spec_contains(S::PowerDk(2, 3), S::DkOfN(6, 3), 7));
  CHECK_FALSE(spec_contains(S::DkOfN(3, 2), S::DkOfN(2, 2), 5));
  const auto witness = containment_counterexample(S::DkOfN(3, 2), S::DkOfN(2, 2), 5);
  REQUIRE(witness);
  CHECK(total_degree(*witness) == 3);

  const auto strict = strictness_witness(S::DkOfN(2, 2), S::DkOfN(3, 2), 5);
  REQUIRE(strict);
  CHECK(total_degree(*strict) == 3);

  CHECK_THROWS_AS(spec_contains(S::DOfN(2), S::DOfN(3), 4), std::invalid_argument);
}

TEST_CASE("degenerate specs normalize") {
  using S = InfinitesimalSpec;
  CHECK(S::PowerDk(3, 1) == S::Dk(3));
  CHECK(S::DkOfN(3, 1) == S::Dk(3));
  CHECK(S::DOfN(1) == S::Dk(1));
  CHECK(S::DkOfN(1, 4) == S::DOfN(4));
  CHECK(S::ProductDk({2}) == S::Dk(2));
  CHECK_THROWS_AS(S::Dk(0), std::invalid_argument);
  CHECK_THROWS_AS(S::DInfTrunc(2, 0), std::invalid_argument);
}

TEST_CASE("D_inf truncation shares the D_K(n) predicate") {
  const auto a = InfinitesimalSpec::DInfTrunc(3, 2);
  const auto b = InfinitesimalSpec::DkOfN(2, 3);
  for (const auto& e : exponents_up_to(3, 6)) CHECK(a.vanishes(e) == b.vanishes(e));
  CHECK(spec_contains(a, b, 7));
  CHECK(spec_contains(b, a, 7));
}

TEST_CASE("spec strings") {
  using S = InfinitesimalSpec;
  CHECK(parse_spec("D") == S::Dk(1));
  CHECK(parse_spec("D_2") == S::Dk(2));
  CHECK(parse_spec("D(2)") == S::DOfN(2));
  CHECK(parse_spec("D_2(3)") == S::DkOfN(2, 3));
  CHECK(parse_spec("(D_2)^3") == S::PowerDk(2, 3));
  CHECK(parse_spec("Dinf(4,2)") == S::DInfTrunc(4, 2));
  CHECK(parse_spec("D_2 x D_3") == S::ProductDk({2, 3}));
  CHECK(parse_spec("DxD") == S::ProductDk({1, 1}));
  CHECK_THROWS_AS(parse_spec("D_(2)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("E"), std::invalid_argument);
  for (const auto& s : {S::Dk(1), S::Dk(3), S::DOfN(3), S::DkOfN(2, 4), S::PowerDk(2, 2),
                        S::DInfTrunc(3, 2), S::ProductDk({1, 2, 3})}) {
    CHECK(parse_spec(s.to_string()) == s);
  }
}

TEST_CASE("Kock-Lawvere extraction") {
  const auto s = InfinitesimalSpec::DkOfN(2, 2);
  const auto x1 = q_gen(s, 0), x2 = q_gen(s, 1);
  const auto f = q_const(s, 2) + Q(3) * x1 + x1 * x2;
  const std::map<Exponent, Q> expected{{{0, 0}, Q(2)}, {{1, 0}, Q(3)}, {{1, 1}, Q(1)}};
  CHECK(kl_extract(f) == expected);

  const auto c = kl_extract(q_const(s, 7));
  CHECK(c.size() == 1);
  CHECK(c.at({0, 0}) == 7);

  // Every monomial basis element round-trips, n, k <= 3.
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 3; ++k) {
      const auto spec = InfinitesimalSpec::DkOfN(k, n);
      for (const auto& e : exponents_up_to(static_cast<std::size_t>(n), k)) {
        const std::map<Exponent, Q> mono{{e, Q(1)}};
        CHECK(kl_extract(evaluate_on_generators(mono, spec)) == mono);
      }
    }
  }
}

TEST_CASE("taylor_eval") {
  SUBCASE("u^2 at 3 over D") {
    const auto s = InfinitesimalSpec::Dk(1);
    SmoothField<double> f{1, 2, [](std::span<const double> x, std::span<const int> a) {
                            switch (a[0]) {
                              case 0: return x[0] * x[0];
                              case 1: return 2 * x[0];
                              case 2: return 2.0;
                              default: return 0.0;
                            }
                          }};
    const double x = 3.0;
    const auto d = WeilElement<double>::generator(s, 0);
    const auto r = taylor_eval(f, std::span<const double>(&x, 1), std::span(&d, 1));
    CHECK(r == WeilElement<double>::constant(s, 9.0) + 6.0 * d);
  }
  SUBCASE("sin at 0 over D_2") {
    const auto s = InfinitesimalSpec::Dk(2);
    const auto d = WeilElement<double>::generator(s, 0);
    // sin(0)=0, sin'(0)=1, sin''(0)=0
    CHECK(nilgeom::weil::sin(d) == d);
    const auto c = nilgeom::weil::cos(d);
    CHECK(c.coefficient({0}) == 1.0);
    CHECK(c.coefficient({1}) == 0.0);
    CHECK(c.coefficient({2}) == -0.5);
  }
  SUBCASE("u*v at (1,1) over D(2)") {
    const auto s = InfinitesimalSpec::DOfN(2);
    SmoothField<Q> f{2, 2, [](std::span<const Q> x, std::span<const int> a) -> Q {
                       if (a[0] == 0 && a[1] == 0) return x[0] * x[1];
                       if (a[0] == 1 && a[1] == 0) return x[1];
                       if (a[0] == 0 && a[1] == 1) return x[0];
                       if (a[0] == 1 && a[1] == 1) return Q(1);
                       return Q(0);
                     }};
    const std::vector<Q> x{Q(1), Q(1)};
    const std::vector eps{q_gen(s, 0), q_gen(s, 1)};
    const auto r = taylor_eval<Q>(f, x, eps);
    CHECK(r == q_const(s, 1) + eps[0] + eps[1]);
    CHECK(augmentation(r) == 1);
  }
  SUBCASE("errors") {
    const auto s = InfinitesimalSpec::Dk(3);
    SmoothField<double> f{1, 1, [](std::span<const double>, std::span<const int>) { return 1.0; }};
    const double x = 0.0;
    const auto d = WeilElement<double>::generator(s, 0);
    CHECK_THROWS_AS(taylor_eval(f, std::span<const double>(&x, 1), std::span(&d, 1)),
                    std::invalid_argument);
    f.max_order = 3;
    const auto unit = d + 1.0;
    CHECK_THROWS_AS(taylor_eval(f, std::span<const double>(&x, 1), std::span(&unit, 1)),
                    std::domain_error);
  }
}

namespace {

// Exact partial derivatives of a polynomial, by differentiating monomials.
SmoothField<Q> polynomial_field(const Poly& p, std::size_t dim) {
  return {dim, 64, [p](std::span<const Q> x, std::span<const int> alpha) {
            Q total(0);
            for (const auto& [e, c] : p) {
              Q term = c;
              for (std::size_t i = 0; i < e.size() && term != 0; ++i) {
                if (alpha[i] > e[i]) term = 0;
                for (int j = 0; j < alpha[i] && term != 0; ++j) term *= (e[i] - j);
                for (int j = 0; j < e[i] - alpha[i] && term != 0; ++j) term *= x[i];
              }
              total += term;
            }
            return total;
          }};
}

}  // namespace

TEST_CASE("taylor_eval is multiplicative on polynomials") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coeff(-4, 4), deg(0, 2);
  const auto s = InfinitesimalSpec::DkOfN(3, 2);
  for (int trial = 0; trial < 50; ++trial) {
    Poly f, g;
    for (int t = 0; t < 4; ++t) {
      f[{deg(rng), deg(rng)}] += coeff(rng);
      g[{deg(rng), deg(rng)}] += coeff(rng);
    }
    const std::vector<Q> x{Q(coeff(rng)), Q(1, 2)};
    const std::vector eps{q_gen(s, 0) + Q(2) * q_gen(s, 1) * q_gen(s, 1), q_gen(s, 1) - q_gen(s, 0)};
    const auto fg = untruncated_mul(f, g);
    const auto lhs = taylor_eval<Q>(polynomial_field(fg, 2), x, eps);
    const auto rhs = taylor_eval<Q>(polynomial_field(f, 2), x, eps) *
                     taylor_eval<Q>(polynomial_field(g, 2), x, eps);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("reduction is idempotent") {
  const auto s = InfinitesimalSpec::PowerDk(2, 2);
  const auto a = (q_const(s, 1) + q_gen(s, 0) + q_gen(s, 1)).pow(5);
  CHECK(WeilElement<Q>(s, a.terms()) == a);
}

TEST_CASE("jets support division by units") {
  const auto s = InfinitesimalSpec::Dk(3);
  const auto x = Jet::constant(s, 2.0) + Jet::generator(s, 0);
  const auto r = (1.0 / x) * x;
  CHECK(approx_equal(r, Jet::constant(s, 1.0), 1e-15));
  CHECK_THROWS_AS(reciprocal(Jet::generator(s, 0)), std::domain_error);
  const auto q = nilgeom::weil::sqrt(x) * nilgeom::weil::sqrt(x);
  CHECK(approx_equal(q, x, 1e-14));
}

TEST_CASE("JSON form") {
  const auto s = InfinitesimalSpec::DkOfN(2, 2);
  const auto a = q_const(s, 3) + Q(1, 2) * q_gen(s, 1) - Q(5) * q_gen(s, 0) * q_gen(s, 1);
  const auto j = to_json(a);
  CHECK(j.dump() ==
        R"({"spec":{"K":0,"k":2,"kind":"DkOfN","n":2},"terms":[{"coeff":"3/1","exp":[0,0]},)"
        R"({"coeff":"1/2","exp":[0,1]},{"coeff":"-5/1","exp":[1,1]}]})");
  CHECK(element_from_json_exact(j) == a);

  const auto f = Jet::constant(s, 0.25) + 1.5 * Jet::generator(s, 0);
  CHECK(element_from_json_float(to_json(f)) == f);

  auto bad = j;
  bad["terms"].push_back({{"exp", {3, 0}}, {"coeff", "1/1"}});
  CHECK_THROWS_AS(element_from_json_exact(bad), std::invalid_argument);

  const auto t = InfinitesimalSpec::Tensor(InfinitesimalSpec::PowerDk(1, 2),
                                           InfinitesimalSpec::ProductDk({1, 2}));
  CHECK(spec_from_json(spec_to_json(t)) == t);
}

TEST_CASE("display form") {
  const auto s = InfinitesimalSpec::DOfN(2);
  const auto a = (q_const(s, 1) + q_gen(s, 0)) * (q_const(s, 1) + q_gen(s, 1));
  CHECK(to_string(a) == "1 + x1 + x2");
  CHECK(to_string(WeilElement<Q>(s)) == "0");
  const auto p = InfinitesimalSpec::PowerDk(2, 2);
  const auto b = Q(-2) * q_gen(p, 0) * q_gen(p, 0) * q_gen(p, 1) + q_const(p, 3) - q_gen(p, 1);
  CHECK(to_string(b) == "3 - x2 - 2*x1^2*x2");
}

TEST_CASE("tensor spec keeps factors independent") {
  const auto t = InfinitesimalSpec::Tensor(InfinitesimalSpec::PowerDk(1, 2),
                                           InfinitesimalSpec::DkOfN(2, 3));
  CHECK(t.generators() == 5);
  CHECK(t.max_total_degree() == 4);
  const auto inner = q_gen(InfinitesimalSpec::DkOfN(2, 3), 1);
  const auto lifted = embed(inner, t, 2);
  CHECK(lifted == q_gen(t, 3));
  CHECK((q_gen(t, 0) * q_gen(t, 0)).is_zero());
  CHECK_FALSE((q_gen(t, 0) * q_gen(t, 1) * lifted * lifted).is_zero());
  CHECK((lifted * lifted * lifted).is_zero());
}

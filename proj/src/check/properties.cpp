#include "nilgeom/check/properties.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "nilgeom/hybrid/simulator.hpp"
#include "nilgeom/manifold/classical.hpp"
#include "nilgeom/sdg/microlinearity.hpp"
#include "nilgeom/sdg/report.hpp"

namespace nilgeom::check {

namespace {

using std::numbers::pi;
using weil::Exponent;
using weil::InfinitesimalSpec;
using weil::Rational;
using RElem = weil::WeilElement<Rational>;
using FElem = weil::WeilElement<double>;

class Tally {
 public:
  explicit Tally(std::string name) { out_.name = std::move(name); }

  bool check(bool ok, const std::function<std::string()>& what) {
    ++out_.cases;
    if (!ok) {
      ++out_.failures;
      if (out_.notes.size() < 5) out_.notes.push_back(what());
    }
    return ok;
  }

  bool measure(double err, double tol, const std::function<std::string()>& what) {
    out_.worst = std::max(out_.worst, std::isnan(err) ? INFINITY : err);
    return check(err <= tol, [&] { return fmt::format("{} (error {:.3g} > {:.3g})", what(), err, tol); });
  }

  Outcome done(std::string summary) {
    out_.summary = std::move(summary);
    return std::move(out_);
  }

  long cases() const { return out_.cases; }

 private:
  Outcome out_;
};

Rational random_rational(std::mt19937_64& rng, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span), den(1, 6);
  return Rational(num(rng), den(rng));
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -1.0, 1.0);
  return v;
}

std::vector<Rational> random_rationals(std::size_t n, std::mt19937_64& rng) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = random_rational(rng, 6);
  return v;
}

// A few random terms; exponents may exceed the ideal so reduction is exercised.
RElem random_element(const InfinitesimalSpec& spec, std::mt19937_64& rng) {
  RElem::Terms terms;
  const int count = uniform_int(rng, 1, 6);
  for (int t = 0; t < count; ++t) {
    Exponent e(spec.generators());
    for (auto& v : e) v = uniform_int(rng, 0, 2) == 0 ? uniform_int(rng, 0, 5) : uniform_int(rng, 0, 1);
    terms[e] += random_rational(rng);
  }
  return RElem(spec, terms);
}

// Untruncated polynomial product, reduced afterwards.
RElem product_then_reduce(const RElem& a, const RElem& b) {
  RElem::Terms full;
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      full[e] += ca * cb;
    }
  }
  return RElem(a.spec(), full);
}

struct KindCase {
  InfinitesimalSpec spec;
  std::vector<int> generator_order;  // expected nilpotency order per generator
};

// Expected nilpotency orders are derived from the defining parameters, not
// from the spec object under test.
KindCase random_spec(int kind, std::mt19937_64& rng) {
  const int n = uniform_int(rng, 1, 4), k = uniform_int(rng, 1, 4);
  const auto un = static_cast<std::size_t>(n);
  switch (kind) {
    case 0:
      return {InfinitesimalSpec::Dk(k), {k + 1}};
    case 1:
      return {InfinitesimalSpec::DOfN(n), std::vector<int>(un, 2)};
    case 2:
      return {InfinitesimalSpec::DkOfN(k, n), std::vector<int>(un, k + 1)};
    case 3:
      return {InfinitesimalSpec::PowerDk(k, n), std::vector<int>(un, k + 1)};
    case 4: {
      std::vector<int> ks(un), orders(un);
      for (std::size_t i = 0; i < un; ++i) {
        ks[i] = uniform_int(rng, 1, 4);
        orders[i] = ks[i] + 1;
      }
      return {InfinitesimalSpec::ProductDk(ks), orders};
    }
    case 5:
      return {InfinitesimalSpec::DInfTrunc(n, k), std::vector<int>(un, k + 1)};
    default: {
      const int n1 = uniform_int(rng, 1, 3), k1 = uniform_int(rng, 1, 3), k2 = uniform_int(rng, 1, 3);
      std::vector<int> orders(static_cast<std::size_t>(n1), k1 + 1);
      orders.push_back(k2 + 1);
      return {InfinitesimalSpec::Tensor(InfinitesimalSpec::DkOfN(k1, n1), InfinitesimalSpec::Dk(k2)),
              orders};
    }
  }
}

constexpr const char* kKindNames[] = {"Dk",        "DOfN",      "DkOfN", "PowerDk",
                                      "ProductDk", "DInfTrunc", "Tensor"};

// Torsion-free Γ with polynomial entries of degree <= 2 and rational
// coefficients, so synthetic identities can be compared exactly.
sdg::SyntheticConnection<Rational> random_polynomial_connection(std::size_t n,
                                                                std::mt19937_64& rng) {
  std::vector<weil::TaylorPolynomial<Rational>> polys(n * n * n, {n, {}});
  const auto exps = weil::exponents_up_to(n, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        weil::TaylorPolynomial<Rational> p{n, {}};
        for (const auto& e : exps) {
          const Rational c = random_rational(rng, 4);
          if (c != 0) p.coeffs.emplace(e, c);
        }
        polys[(i * n + j) * n + k] = p;
        polys[(i * n + k) * n + j] = p;
      }
  return sdg::SyntheticConnection<Rational>(
      std::make_shared<sdg::PolynomialChristoffel<Rational>>(n, std::move(polys)));
}

sdg::SyntheticConnection<double> connection_for(const manifold::Chart& chart, const Options& opt) {
  auto conn = sdg::chart_connection(chart);
  return opt.sign_fault ? conn.with_sign_fault() : conn;
}

std::string chart_label(const manifold::Chart& chart) {
  if (chart.name() == "euclidean") return fmt::format("euclidean({})", chart.dim());
  return fmt::format("{}(r={})", chart.name(), chart.params().at("radius"));
}

template <class T>
double point_distance(const sdg::Vec<T>& a, const sdg::Vec<T>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (weil::ScalarTraits<T>::kExact) {
      if (!(a[i] == b[i])) return INFINITY;
    } else {
      worst = std::max(worst, weil::max_abs_coefficient(a[i] - b[i]));
    }
  }
  return worst;
}

template <class T>
sdg::Vec<T> scaled(sdg::Vec<T> v, const T& s) {
  for (auto& x : v) x *= s;
  return v;
}

template <class T>
sdg::Vec<T> at(const sdg::TangentVector<T>& t, const weil::WeilElement<T>& d) {
  auto out = t.base;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.vel[i] * d;
  return out;
}

// Transport identities on one fiber. `tol` is 0 for exact scalars.
template <class T>
void connection_case(Tally& tally, const sdg::SyntheticConnection<T>& conn,
                     const sdg::TangentVector<T>& t1, const sdg::TangentVector<T>& t2,
                     const sdg::TangentVector<T>& v, const T& alpha, double tol,
                     const std::string& label) {
  using E = weil::WeilElement<T>;
  const auto& A = t1.base.front().spec();
  const E e1 = sdg::d1<T>(A), e2 = sdg::d2<T>(A), zero(A);
  const auto g = sdg::nabla(conn, t1, t2);
  const auto [k1, k2] = sdg::k_map(g);
  tally.check(point_distance(k1.base, t1.base) == 0 && point_distance(k1.vel, t1.vel) == 0 &&
                  point_distance(k2.base, t2.base) == 0 && point_distance(k2.vel, t2.vel) == 0,
              [&] { return label + ": k_map(nabla(t1,t2)) != (t1,t2)"; });
  tally.measure(point_distance(sdg::evaluate(g, e1, zero), at(t1, e1)), 0.0,
                [&] { return label + ": nabla(t1,t2)(d1,0) != t1(d1)"; });
  tally.measure(point_distance(sdg::evaluate(g, zero, e2), at(t2, e2)), 0.0,
                [&] { return label + ": nabla(t1,t2)(0,d2) != t2(d2)"; });
  const sdg::TangentVector<T> s1{t1.base, scaled(t1.vel, alpha)};
  const sdg::TangentVector<T> s2{t2.base, scaled(t2.vel, alpha)};
  tally.measure(point_distance(sdg::evaluate(sdg::nabla(conn, s1, t2), e1, e2),
                               sdg::evaluate(g, alpha * e1, e2)),
                tol, [&] { return label + ": nabla(a t1,t2) != nabla(t1,t2)(a d1, d2)"; });
  tally.measure(point_distance(sdg::evaluate(sdg::nabla(conn, t1, s2), e1, e2),
                               sdg::evaluate(g, e1, alpha * e2)),
                tol, [&] { return label + ": nabla(t1,a t2) != nabla(t1,t2)(d1, a d2)"; });
  // p and q between the fibers over t1(0) and t1(e).
  const auto moved = sdg::transport_p(conn, t1, e1, v);
  const auto back = sdg::transport_q(conn, t1, e1, moved);
  tally.measure(point_distance(back.vel, v.vel), tol, [&] { return label + ": q o p != id"; });
  const sdg::TangentVector<T> w{at(t1, e1), v.vel};
  const auto there = sdg::transport_p(conn, t1, e1, sdg::transport_q(conn, t1, e1, w));
  tally.measure(point_distance(there.vel, w.vel), tol, [&] { return label + ": p o q != id"; });
}

}  // namespace

std::vector<manifold::Chart> catalog_charts() {
  std::vector<manifold::Chart> out;
  for (std::size_t n : {2u, 3u, 4u}) out.push_back(manifold::catalog("euclidean", {.dim = n}));
  for (double r : {0.5, 1.0, 2.0}) out.push_back(manifold::catalog("sphere2", {.radius = r}));
  for (double r : {0.5, 1.0, 2.0}) out.push_back(manifold::catalog("sphere3", {.radius = r}));
  return out;
}

manifold::Point random_interior(const manifold::Chart& chart, std::mt19937_64& rng) {
  if (chart.name() == "sphere2") return {uniform(rng, 0.3, pi - 0.3), uniform(rng, -pi, pi)};
  if (chart.name() == "sphere3") {
    return {uniform(rng, 0.3, pi - 0.3), uniform(rng, 0.3, pi - 0.3), uniform(rng, 0.3, 2 * pi - 0.3)};
  }
  manifold::Point x(chart.dim());
  for (auto& v : x) v = uniform(rng, -2.0, 2.0);
  return x;
}

Outcome algebra_laws(int cases_per_kind, const Options& opt) {
  Tally tally("algebra_laws");
  std::mt19937_64 rng(opt.seed);
  constexpr int kKinds = 7;
  for (int kind = 0; kind < kKinds; ++kind) {
    for (int c = 0; c < cases_per_kind; ++c) {
      const auto kc = random_spec(kind, rng);
      const auto& spec = kc.spec;
      const std::string label = fmt::format("{} {}", kKindNames[kind], spec.to_string());
      const RElem a = random_element(spec, rng), b = random_element(spec, rng),
                  d = random_element(spec, rng);
      const RElem one = RElem::constant(spec, 1), zero(spec);
      auto law = [&](bool ok, const char* what) {
        tally.check(ok, [&] { return fmt::format("{}: {}", label, what); });
      };
      law((a + b) + d == a + (b + d), "additive associativity");
      law(a + b == b + a, "additive commutativity");
      law(a + zero == a && a - a == zero, "additive identity and inverse");
      law((a * b) * d == a * (b * d), "multiplicative associativity");
      law(a * b == b * a, "multiplicative commutativity");
      law(a * (b + d) == a * b + a * d, "distributivity");
      law(one * a == a, "multiplicative identity");
      law(a * b == product_then_reduce(a, b), "product agrees with reduction of the full product");
      law((a * b).augmentation() == a.augmentation() * b.augmentation() &&
              (a + b).augmentation() == a.augmentation() + b.augmentation() &&
              one.augmentation() == 1,
          "augmentation is a ring morphism");
      const std::size_t g = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(spec.generators()) - 1));
      const RElem x = RElem::generator(spec, g);
      const int expected = kc.generator_order[g];
      law(x.pow(static_cast<unsigned>(expected)).is_zero() &&
              !x.pow(static_cast<unsigned>(expected - 1)).is_zero() &&
              weil::nilpotency_order(x) == expected,
          "generator nilpotency order");
      law(a.nilpotent_part().pow(static_cast<unsigned>(spec.max_total_degree() + 1)).is_zero(),
          "nilpotent part is nilpotent");
    }
  }
  return tally.done(fmt::format("{} randomized cases per kind over {} kinds, exact arithmetic",
                                cases_per_kind, kKinds));
}

Outcome containment_chain(int max_n, int max_k, int degree_bound) {
  Tally tally("containment_chain");
  auto witness_ok = [&](const InfinitesimalSpec& small, const InfinitesimalSpec& large) {
    const auto w = weil::strictness_witness(small, large, degree_bound);
    return w && small.vanishes(*w) && !large.vanishes(*w) && weil::total_degree(*w) <= degree_bound;
  };
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 1; k <= max_k; ++k) {
      const auto dkn = InfinitesimalSpec::DkOfN(k, n);
      const auto power = InfinitesimalSpec::PowerDk(k, n);
      const auto wide = InfinitesimalSpec::DkOfN(n * k, n);
      const std::string label = fmt::format("n={} k={}", n, k);
      tally.check(weil::spec_contains(dkn, power, degree_bound),
                  [&] { return label + ": D_k(n) not in (D_k)^n"; });
      tally.check(weil::spec_contains(power, wide, degree_bound),
                  [&] { return label + ": (D_k)^n not in D_nk(n)"; });
      if (n >= 2) {
        tally.check(witness_ok(dkn, power), [&] { return label + ": no witness D_k(n) != (D_k)^n"; });
        tally.check(witness_ok(power, wide), [&] { return label + ": no witness (D_k)^n != D_nk(n)"; });
      } else {
        tally.check(!weil::strictness_witness(dkn, power, degree_bound) &&
                        !weil::strictness_witness(power, wide, degree_bound),
                    [&] { return label + ": spurious witness for n = 1"; });
      }
      for (int l = k + 1; l <= max_k; ++l) {
        const auto dln = InfinitesimalSpec::DkOfN(l, n);
        const std::string pair = fmt::format("{} l={}", label, l);
        tally.check(weil::spec_contains(dkn, dln, degree_bound),
                    [&] { return pair + ": D_k(n) not in D_l(n)"; });
        tally.check(!weil::spec_contains(dln, dkn, degree_bound),
                    [&] { return pair + ": D_l(n) in D_k(n)"; });
        tally.check(witness_ok(dkn, dln), [&] { return pair + ": no strictness witness"; });
      }
    }
  }
  return tally.done(fmt::format("n <= {}, k < l <= {}, degree bound {}", max_n, max_k, degree_bound));
}

Outcome kl_uniqueness(int random_polynomials, int max_nk, const Options& opt) {
  Tally tally("kock_lawvere_round_trip");
  std::vector<InfinitesimalSpec> specs;
  for (int n = 1; n <= max_nk; ++n) {
    for (int k = 1; k <= max_nk; ++k) {
      specs.push_back(InfinitesimalSpec::DkOfN(k, n));
      specs.push_back(InfinitesimalSpec::PowerDk(k, n));
    }
  }
  long basis_cases = 0;
  for (const auto& spec : specs) {
    for (const auto& e : weil::basis_monomials(spec)) {
      const std::map<Exponent, Rational> poly{{e, Rational(1)}};
      tally.check(weil::kl_extract(weil::evaluate_on_generators(poly, spec)) == poly, [&] {
        return fmt::format("{}: monomial round trip failed", spec.to_string());
      });
      ++basis_cases;
    }
  }
  std::mt19937_64 rng(opt.seed + 3);
  for (int c = 0; c < random_polynomials; ++c) {
    const auto& spec = specs[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(specs.size()) - 1))];
    std::map<Exponent, Rational> poly;
    for (const auto& e : weil::basis_monomials(spec)) {
      if (uniform_int(rng, 0, 1)) continue;
      const Rational v = random_rational(rng);
      if (v != 0) poly.emplace(e, v);
    }
    tally.check(weil::kl_extract(weil::evaluate_on_generators(poly, spec)) == poly,
                [&] { return fmt::format("{}: polynomial round trip failed", spec.to_string()); });
  }
  return tally.done(fmt::format("{} basis monomials and {} random polynomials, n,k <= {}",
                                basis_cases, random_polynomials, max_nk));
}

Outcome classical_oracle(int points_per_chart, const Options& opt) {
  Tally tally("classical_oracle");
  std::mt19937_64 rng(opt.seed + 5);
  for (const auto& chart : catalog_charts()) {
    const auto label = chart_label(chart);
    const std::size_t n = chart.dim();
    for (int p = 0; p < points_per_chart; ++p) {
      const auto x = random_interior(chart, rng);
      const auto res = manifold::classical_riemann(chart, x);
      const auto& r = res.riemann;
      const auto g = chart.metric(x);
      const auto low = manifold::lower_first_index(r, g);
      double anti = 0.0, pair = 0.0, bianchi = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
              anti = std::max({anti, std::abs(r(i, j, k, l) + r(i, j, l, k)),
                               std::abs(low(i, j, k, l) + low(j, i, k, l))});
              pair = std::max(pair, std::abs(low(i, j, k, l) - low(k, l, i, j)));
              bianchi = std::max(bianchi, std::abs(r(i, j, k, l) + r(i, k, l, j) + r(i, l, j, k)));
            }
      tally.measure(anti, 1e-8, [&] { return label + ": antisymmetry"; });
      tally.measure(pair, 1e-8, [&] { return label + ": pair symmetry"; });
      tally.measure(bianchi, 1e-8, [&] { return label + ": first Bianchi identity"; });
      if (chart.name() != "euclidean") {
        const double radius = chart.params().at("radius");
        const double k = 1.0 / (radius * radius);
        const double expected = static_cast<double>(n * (n - 1)) * k;
        tally.measure(std::abs(res.scalar_curvature - expected) / expected, 1e-8,
                      [&] { return label + ": scalar curvature n(n-1)/r^2"; });
        std::vector<double> u(n, 0.0), v(n, 0.0);
        u[0] = 1.0;
        v[1] = 1.0;
        tally.measure(std::abs(manifold::sectional_curvature(r, g, u, v) - k) / k, 1e-8,
                      [&] { return label + ": sectional curvature 1/r^2"; });
      } else {
        double worst = 0.0;
        for (double c : r.data) worst = std::max(worst, std::abs(c));
        tally.measure(worst, 0.0, [&] { return label + ": flat chart has curvature"; });
      }
      if (chart.name() == "sphere2") {
        const auto exact = chart.christoffel(x);
        const auto fd = chart.with_mode(manifold::DerivativeMode::kFiniteDifference).christoffel(x);
        double worst = 0.0;
        for (std::size_t idx = 0; idx < exact.data.size(); ++idx) {
          worst = std::max(worst, std::abs(exact.data[idx] - fd.data[idx]));
        }
        tally.measure(worst, 1e-6, [&] { return label + ": finite-difference Christoffel symbols"; });
      }
    }
  }
  return tally.done(fmt::format("{} points on each of 9 catalog charts", points_per_chart));
}

Outcome connection_identities(int fibers, const Options& opt) {
  Tally tally("connection_identities");
  std::mt19937_64 rng(opt.seed + 7);
  const auto A = sdg::square_algebra();

  // Exact: rational polynomial connections.
  for (int f = 0; f < fibers; ++f) {
    const std::size_t n = 2 + static_cast<std::size_t>(f % 2);
    auto conn = random_polynomial_connection(n, rng);
    if (opt.sign_fault) conn = conn.with_sign_fault();
    const auto x = random_rationals(n, rng);
    auto tv = [&] { return sdg::make_tangent<Rational>(A, x, random_rationals(n, rng)); };
    const auto t1 = tv(), t2 = tv(), v = tv();
    connection_case<Rational>(tally, conn, t1, t2, v, random_rational(rng), 0.0, "polynomial");
  }

  // Floating point on the unit 2-sphere.
  const auto chart = manifold::catalog("sphere2", {.radius = 1.0});
  const auto conn = connection_for(chart, opt);
  for (int f = 0; f < fibers; ++f) {
    const auto x = random_interior(chart, rng);
    auto tv = [&] { return sdg::make_tangent<double>(A, x, random_vector(2, rng)); };
    const auto t1 = tv(), t2 = tv(), v = tv();
    connection_case<double>(tally, conn, t1, t2, v, uniform(rng, -2.0, 2.0), 1e-12, "sphere2");
  }
  // Exact on sphere2: coordinates are translated so the fiber sits at the
  // origin, and Γ is replaced by its second-order Taylor polynomial there with
  // the double coefficients read as exact rationals. In D×D a point moves only
  // by nilpotents of degree <= 2, so this is Γ itself on the fiber.
  for (int f = 0; f < fibers; ++f) {
    const auto x0 = random_interior(chart, rng);
    std::vector<weil::TaylorPolynomial<Rational>> polys;
    for (const auto& p : chart.christoffel_taylor(x0, 2)) {
      weil::TaylorPolynomial<Rational> q{p.vars, {}};
      for (const auto& [e, c] : p.coeffs) q.coeffs.emplace(e, Rational(c));
      polys.push_back(std::move(q));
    }
    auto exact = sdg::SyntheticConnection<Rational>(
        std::make_shared<sdg::PolynomialChristoffel<Rational>>(2, std::move(polys)));
    if (opt.sign_fault) exact = exact.with_sign_fault();
    const std::vector<Rational> origin(2, Rational(0));
    auto tv = [&] {
      std::vector<Rational> v;
      for (double c : random_vector(2, rng)) v.emplace_back(c);
      return sdg::make_tangent<Rational>(A, origin, v);
    };
    const auto t1 = tv(), t2 = tv(), v = tv();
    connection_case<Rational>(tally, exact, t1, t2, v, Rational(uniform(rng, -2.0, 2.0)), 0.0,
                              "sphere2 exact");
  }
  return tally.done(fmt::format(
      "{} fibers each: exact polynomial connections, sphere2 exact, sphere2 float (1e-12)", fibers));
}

Outcome holonomy_structure(int configs_per_chart, const Options& opt) {
  Tally tally("holonomy_lower_order_vanishing");
  std::mt19937_64 rng(opt.seed + 11);
  const auto A = sdg::square_algebra();
  for (int c = 0; c < configs_per_chart; ++c) {
    const std::size_t n = 2 + static_cast<std::size_t>(c % 2);
    auto conn = random_polynomial_connection(n, rng);
    if (opt.sign_fault) conn = conn.with_sign_fault();
    const auto x = random_rationals(n, rng);
    auto tv = [&] { return sdg::make_tangent<Rational>(A, x, random_rationals(n, rng)); };
    const auto t1 = tv(), t2 = tv(), t3 = tv();
    const auto diff = sdg::holonomy(conn, sdg::square_chain(sdg::nabla(conn, t1, t2)), t3);
    tally.measure(sdg::lower_order_residual(diff), 0.0, [] { return std::string("polynomial"); });
  }
  for (const auto& chart : catalog_charts()) {
    const auto conn = connection_for(chart, opt);
    const auto label = chart_label(chart);
    const std::size_t n = chart.dim();
    // Γ ≡ 0 is exact on the flat chart; elsewhere roundoff is allowed.
    const double tol = chart.name() == "euclidean" ? 0.0 : 1e-12;
    for (int c = 0; c < configs_per_chart; ++c) {
      const auto x = random_interior(chart, rng);
      auto tv = [&] { return sdg::make_tangent<double>(A, x, random_vector(n, rng)); };
      const auto t1 = tv(), t2 = tv(), t3 = tv();
      const auto diff = sdg::holonomy(conn, sdg::square_chain(sdg::nabla(conn, t1, t2)), t3);
      tally.measure(sdg::lower_order_residual(diff), tol, [&] { return label; });
    }
  }
  return tally.done(fmt::format(
      "{} configurations per chart: exact polynomial connections and 9 catalog charts",
      configs_per_chart));
}

Outcome oracle_equivalence(int points_per_chart, const Options& opt) {
  Tally tally("oracle_equivalence");
  std::mt19937_64 rng(opt.seed + 13);
  for (const auto& chart : catalog_charts()) {
    for (auto mode : {manifold::DerivativeMode::kClosedForm,
                      manifold::DerivativeMode::kFiniteDifference}) {
      const auto c = chart.with_mode(mode);
      const auto conn = connection_for(c, opt);
      const bool closed = mode == manifold::DerivativeMode::kClosedForm;
      const double tol = closed ? 1e-6 : 1e-3;
      const auto label = fmt::format("{} {}", chart_label(chart), closed ? "closed-form" : "finite-difference");
      for (int p = 0; p < points_per_chart; ++p) {
        const auto x = random_interior(c, rng);
        const auto t1 = random_vector(c.dim(), rng), t2 = random_vector(c.dim(), rng),
                   t3 = random_vector(c.dim(), rng);
        const auto rec = sdg::compare_curvature(c, conn, x, t1, t2, t3);
        tally.measure(rec.rel_err, tol, [&] { return label; });
      }
      if (chart.name() == "sphere3" && closed) {
        const double radius = chart.params().at("radius");
        const double expected = 6.0 / (radius * radius);
        for (int p = 0; p < points_per_chart; ++p) {
          const auto x = random_interior(c, rng);
          const double s = sdg::synthetic_scalar_curvature(conn, c, x);
          tally.measure(std::abs(s - expected) / expected, 1e-6,
                        [&] { return label + ": synthetic scalar curvature 6/r^2"; });
        }
      }
    }
  }
  return tally.done(fmt::format(
      "{} points per chart and mode; rel tol 1e-6 closed form, 1e-3 finite differences",
      points_per_chart));
}

Outcome tensor_symmetries(int points_per_chart, const Options& opt) {
  Tally tally("tensor_symmetries");
  std::mt19937_64 rng(opt.seed + 17);
  for (const auto& chart : catalog_charts()) {
    const auto conn = connection_for(chart, opt);
    const auto label = chart_label(chart);
    const std::size_t n = chart.dim();
    for (int p = 0; p < points_per_chart; ++p) {
      const auto x = random_interior(chart, rng);
      const auto a = random_vector(n, rng), b = random_vector(n, rng), c = random_vector(n, rng);
      const auto rab = sdg::synthetic_curvature(conn, x, a, b, c);
      const auto rba = sdg::synthetic_curvature(conn, x, b, a, c);
      const auto rbc = sdg::synthetic_curvature(conn, x, b, c, a);
      const auto rca = sdg::synthetic_curvature(conn, x, c, a, b);
      double anti = 0.0, bianchi = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        anti = std::max(anti, std::abs(rab[i] + rba[i]));
        bianchi = std::max(bianchi, std::abs(rab[i] + rbc[i] + rca[i]));
      }
      tally.measure(anti, 1e-10, [&] { return label + ": antisymmetry in (t1,t2)"; });
      tally.measure(bianchi, 1e-8, [&] { return label + ": first Bianchi identity"; });
    }
  }
  return tally.done(fmt::format("{} points per catalog chart", points_per_chart));
}

Outcome infinitesimal_curvature(int configs, const Options& opt) {
  Tally tally("infinitesimal_curvature");
  std::mt19937_64 rng(opt.seed + 19);
  const std::vector<manifold::Chart> charts{manifold::catalog("sphere3", {.radius = 1.0}),
                                            manifold::catalog("sphere2", {.radius = 2.0})};
  long nonzero = 0;
  for (int k = 1; k <= 3; ++k) {
    for (int m = 4; m <= 8; ++m) {
      const auto inner = InfinitesimalSpec::DkOfN(k, m);
      const auto A = sdg::square_algebra(inner);
      auto infinitesimal = [&] {
        FElem out(A);
        for (int g = 0; g < m; ++g) {
          out += uniform(rng, -1.0, 1.0) *
                 weil::embed(FElem::generator(inner, static_cast<std::size_t>(g)), A, 2);
        }
        return out;
      };
      for (const auto& chart : charts) {
        const auto conn = connection_for(chart, opt);
        const std::size_t n = chart.dim();
        for (int c = 0; c < configs; ++c) {
          const auto x0 = random_interior(chart, rng);
          sdg::TangentVector<double> t1{sdg::lift<double>(A, x0), {}};
          for (auto& xi : t1.base) xi += infinitesimal();
          auto t2 = t1, t3 = t1;
          for (std::size_t i = 0; i < n; ++i) {
            t1.vel.push_back(infinitesimal());
            t2.vel.push_back(infinitesimal());
            t3.vel.push_back(infinitesimal());
          }
          const auto out = sdg::riemann_synthetic(conn, t1, t2, t3);
          for (std::size_t i = 0; i < n; ++i) {
            const auto& v = out.vel[i];
            tally.check(v.augmentation() == 0.0 && weil::is_infinitesimal(v, 0.0), [&] {
              return fmt::format("{} k={} m={}: component {} has augmentation {}",
                                 chart_label(chart), k, m, i, v.augmentation());
            });
            if (!v.is_zero()) ++nonzero;
          }
        }
      }
    }
  }
  return tally.done(fmt::format(
      "k <= 3, m = 4..8, {} configurations per chart; {} components nonzero yet infinitesimal",
      configs, nonzero));
}

Outcome hybrid_reference() {
  Tally tally("hybrid_reference_run");
  hybrid::HybridConfig cfg;
  cfg.h = 0.5;
  cfg.tau_min = -2.0;
  cfg.tau_max = 2.0;
  cfg.steps = 9;
  const auto r = hybrid::simulate(cfg);
  std::vector<std::string> got;
  for (const auto& s : r.timeline) got.emplace_back(hybrid::regime_name(s.regime));
  const std::vector<std::string> want{"SET", "SET", "SET", "G", "G", "G", "SET", "SET", "SET"};
  tally.check(got == want, [&] { return fmt::format("regimes {}", fmt::join(got, ",")); });
  tally.check(r.divisions.at_or_below_h == 0, [&] {
    return fmt::format("{} divisions by rho <= h", r.divisions.at_or_below_h);
  });
  for (const auto& s : r.timeline) {
    if (s.regime != hybrid::Regime::kG) continue;
    const auto& w = std::get<weil::WeilElement<double>>(s.curvature);
    tally.check(weil::is_infinitesimal(w, 0.0),
                [&] { return fmt::format("G sample at tau={} is not infinitesimal", s.tau); });
  }
  tally.check(r.atlas.patches.size() == 2, [] { return std::string("atlas patch count"); });
  tally.check(r.atlas.overlap_lo < r.atlas.overlap_hi, [] { return std::string("empty overlap"); });
  tally.check(!r.atlas.single_global_chart, [] { return std::string("single global chart"); });
  return tally.done(fmt::format("9-step run, regimes {}", fmt::join(got, ",")));
}

Outcome hybrid_invariants() {
  Tally tally("hybrid_invariants");
  for (const char* profile : {"abs", "quadratic"}) {
    for (double h : {0.05, 0.3, 1.0, 5.0}) {
      for (int steps : {2, 9, 40}) {
        hybrid::HybridConfig cfg;
        cfg.h = h;
        cfg.steps = steps;
        cfg.shrink_profile = profile;
        const auto r = hybrid::simulate(cfg);
        const auto label = fmt::format("{} h={} steps={}", profile, h, steps);
        tally.check(r.timeline.size() == static_cast<std::size_t>(steps),
                    [&] { return label + ": timeline length"; });
        tally.check(r.divisions.at_or_below_h == 0, [&] { return label + ": division below h"; });
        for (const auto& s : r.timeline) {
          tally.check((s.regime == hybrid::Regime::kG) == (s.rho <= h),
                      [&] { return fmt::format("{}: tau={} misclassified", label, s.tau); });
          tally.check(s.side == (s.tau < 0 ? "negative" : "positive"),
                      [&] { return fmt::format("{}: tau={} side tag", label, s.tau); });
          if (s.regime == hybrid::Regime::kG) {
            tally.check(std::get<weil::WeilElement<double>>(s.curvature).augmentation() == 0.0,
                        [&] { return label + ": G curvature augmentation"; });
          }
        }
        // SET curvature strictly increases as rho decreases.
        for (std::size_t i = 1; i < r.timeline.size(); ++i) {
          const auto& p = r.timeline[i - 1];
          const auto& q = r.timeline[i];
          if (p.regime != hybrid::Regime::kSet || q.regime != hybrid::Regime::kSet) continue;
          if (p.rho == q.rho) continue;
          const bool ok = (p.rho < q.rho) == (std::get<double>(p.curvature) > std::get<double>(q.curvature));
          tally.check(ok, [&] { return label + ": SET curvature not monotone in rho"; });
        }
        tally.check(r.atlas.patches.size() == 2 && r.atlas.overlap_lo < r.atlas.overlap_hi &&
                        !r.atlas.single_global_chart && r.atlas.exotic_marker,
                    [&] { return label + ": atlas report"; });
      }
    }
  }
  return tally.done("regime partition, side tags, monotone SET curvature, atlas shape");
}

Outcome microlinearity(const Options& opt) {
  Tally tally("microlinearity");
  const auto report = sdg::microlinearity_checks(4, 200, opt.seed + 23);
  for (const auto& c : report.checks) {
    tally.check(c.passed, [&] { return c.name + ": " + c.detail; });
  }
  std::string summary;
  for (const auto& c : report.checks) {
    if (c.name == "coefficient_counts") summary = c.detail;
  }
  return tally.done(summary);
}

bool Suite::passed() const {
  for (const auto& o : outcomes) {
    if (!o.passed()) return false;
  }
  return true;
}

long Suite::cases() const {
  long n = 0;
  for (const auto& o : outcomes) n += o.cases;
  return n;
}

long Suite::failures() const {
  long n = 0;
  for (const auto& o : outcomes) n += o.failures;
  return n;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"weil", "manifold", "sdg", "holonomy", "hybrid"};
  return names;
}

Suite run_suite(std::string_view name, const Options& opt) {
  Suite s{std::string(name), {}};
  if (name == "weil") {
    s.outcomes = {algebra_laws(150, opt), containment_chain(4, 4, 17), kl_uniqueness(200, 3, opt)};
  } else if (name == "manifold") {
    s.outcomes = {classical_oracle(3, opt)};
  } else if (name == "sdg") {
    s.outcomes = {connection_identities(40, opt), tensor_symmetries(3, opt),
                  infinitesimal_curvature(1, opt), microlinearity(opt)};
  } else if (name == "holonomy") {
    s.outcomes = {holonomy_structure(20, opt), oracle_equivalence(3, opt)};
  } else if (name == "hybrid") {
    s.outcomes = {hybrid_reference(), hybrid_invariants()};
  } else {
    throw std::invalid_argument(fmt::format("unknown suite '{}' (expected one of {})", name,
                                            fmt::join(suite_names(), ", ")));
  }
  return s;
}

}  // namespace nilgeom::check

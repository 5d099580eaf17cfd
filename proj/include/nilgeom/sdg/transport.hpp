#pragma once

// Tangent vectors, microsquares, infinitesimal transport and the holonomy
// of an infinitesimal square.
//
// Every coordinate is an element of one working algebra A. A contains the
// square D×D = k[d1,d2]/(d1², d2²) on generators 0 and 1, optionally
// tensored with a further Weil algebra on the remaining generators (points
// and vectors may then be infinitesimal themselves). Plain real data enters
// A as constants.

#include <array>
#include <span>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "nilgeom/sdg/connection.hpp"

namespace nilgeom::sdg {

/// D×D.
inline weil::InfinitesimalSpec square_algebra() { return weil::InfinitesimalSpec::PowerDk(1, 2); }
/// D×D ⊗ inner; inner generators follow d1, d2.
inline weil::InfinitesimalSpec square_algebra(const weil::InfinitesimalSpec& inner) {
  return weil::InfinitesimalSpec::Tensor(square_algebra(), inner);
}

template <class T>
Elem<T> d1(const weil::InfinitesimalSpec& ambient) {
  return Elem<T>::generator(ambient, 0);
}
template <class T>
Elem<T> d2(const weil::InfinitesimalSpec& ambient) {
  return Elem<T>::generator(ambient, 1);
}

template <class T>
Vec<T> lift(const weil::InfinitesimalSpec& ambient, std::span<const T> values) {
  Vec<T> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(Elem<T>::constant(ambient, v));
  return out;
}

/// t(d) = base + d·vel.
template <class T>
struct TangentVector {
  Vec<T> base;
  Vec<T> vel;
};

template <class T>
TangentVector<T> make_tangent(const weil::InfinitesimalSpec& ambient, std::span<const T> base,
                              std::span<const T> vel) {
  if (base.size() != vel.size()) throw std::invalid_argument("make_tangent: size mismatch");
  return {lift(ambient, base), lift(ambient, vel)};
}

/// γ(d1,d2) = base + a·d1 + b·d2 + c·d1·d2.
template <class T>
struct Microsquare {
  Vec<T> base;
  Vec<T> a;
  Vec<T> b;
  Vec<T> c;
};

template <class T>
struct InfinitesimalTwoChain {
  Microsquare<T> square;
  Elem<T> d1;
  Elem<T> d2;
};

/// The chain (γ, d1, d2) with d1, d2 the square generators of γ's algebra.
template <class T>
InfinitesimalTwoChain<T> square_chain(Microsquare<T> square) {
  const auto spec = square.base.front().spec();
  return {std::move(square), sdg::d1<T>(spec), sdg::d2<T>(spec)};
}

class BaseMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

template <class T>
Vec<T> axpy(const Vec<T>& x, const Vec<T>& v, const Elem<T>& s) {
  Vec<T> out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i] * s;
  return out;
}

template <class T>
void require_same_base(const Vec<T>& p, const Vec<T>& q, double tol, const char* where) {
  if (p.size() != q.size()) {
    throw BaseMismatchError(fmt::format("{}: dimensions {} and {} differ", where, p.size(), q.size()));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!weil::approx_equal(p[i], q[i], tol)) {
      throw BaseMismatchError(fmt::format("{}: base points differ in coordinate {}", where, i));
    }
  }
}

}  // namespace detail

/// K: a microsquare restricted to its two axes.
template <class T>
std::pair<TangentVector<T>, TangentVector<T>> k_map(const Microsquare<T>& g) {
  return {{g.base, g.a}, {g.base, g.b}};
}

template <class T>
Vec<T> evaluate(const Microsquare<T>& g, const Elem<T>& s1, const Elem<T>& s2) {
  Vec<T> out = g.base;
  const Elem<T> s12 = s1 * s2;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += g.a[i] * s1 + g.b[i] * s2 + g.c[i] * s12;
  return out;
}

/// d ↦ γ(s, d): base x + a·s, velocity b + c·s.
template <class T>
TangentVector<T> fix_first(const Microsquare<T>& g, const Elem<T>& s) {
  return {detail::axpy(g.base, g.a, s), detail::axpy(g.b, g.c, s)};
}

/// d ↦ γ(d, s): base x + b·s, velocity a + c·s.
template <class T>
TangentVector<T> fix_second(const Microsquare<T>& g, const Elem<T>& s) {
  return {detail::axpy(g.base, g.b, s), detail::axpy(g.a, g.c, s)};
}

/// ∇(t1,t2): a = t1, b = t2, c^i = −Γ^i_jk(x) t1^j t2^k.
template <class T>
Microsquare<T> nabla(const SyntheticConnection<T>& conn, const TangentVector<T>& t1,
                     const TangentVector<T>& t2) {
  detail::require_same_base(t1.base, t2.base, conn.tolerance(), "nabla");
  const std::size_t n = conn.dim();
  if (t1.base.size() != n) {
    throw std::invalid_argument(
        fmt::format("nabla: connection has dimension {}, vectors have {}", n, t1.base.size()));
  }
  const Vec<T> gamma = conn.christoffel(t1.base);
  const auto& spec = t1.base.front().spec();
  Vec<T> c(n, Elem<T>(spec));
  for (std::size_t j = 0; j < n; ++j) {
    if (t1.vel[j].is_zero()) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (t2.vel[k].is_zero()) continue;
      const Elem<T> w = t1.vel[j] * t2.vel[k];
      for (std::size_t i = 0; i < n; ++i) {
        const auto& g = gamma[(i * n + j) * n + k];
        if (!g.is_zero()) c[i] -= g * w;
      }
    }
  }
  if (conn.sign_fault()) {
    for (auto& ci : c) ci = -ci;
  }
  return {t1.base, t1.vel, t2.vel, std::move(c)};
}

/// p_(t,e)(v)(d) = ∇(t,v)(e,d): v moved from t(0) to t(e).
template <class T>
TangentVector<T> transport_p(const SyntheticConnection<T>& conn, const TangentVector<T>& t,
                             const Elem<T>& e, const TangentVector<T>& v) {
  return fix_first(nabla(conn, t, v), e);
}

/// r_d(t,v) = ∇(t,v)(d, ·), the transport of v along t for time d.
template <class T>
TangentVector<T> transport_r(const SyntheticConnection<T>& conn, const TangentVector<T>& t,
                             const TangentVector<T>& v, const Elem<T>& d) {
  return transport_p(conn, t, d, v);
}

/// q_(t,e)(w)(d) = ∇(∇(t,t)(e,·), w)(−e, d): w moved from t(e) back to t(0).
template <class T>
TangentVector<T> transport_q(const SyntheticConnection<T>& conn, const TangentVector<T>& t,
                             const Elem<T>& e, const TangentVector<T>& w) {
  const TangentVector<T> u = fix_first(nabla(conn, t, t), e);
  detail::require_same_base(u.base, w.base, conn.tolerance(), "transport_q");
  return fix_first(nabla(conn, u, w), -e);
}

/// Edges γ1 = γ(−,0), γ2 = γ(d1,−), γ3 = γ(−,d2), γ4 = γ(0,−).
template <class T>
std::array<TangentVector<T>, 4> contour(const InfinitesimalTwoChain<T>& chain) {
  const auto& g = chain.square;
  const Elem<T> zero(chain.d1.spec());
  return {fix_second(g, zero), fix_first(g, chain.d1), fix_second(g, chain.d2), fix_first(g, zero)};
}

/// r(γ,d1,d2,t3) − t3: t3 carried forward along γ1 (d1) and γ2 (d2), then
/// back along γ3 (d1) and γ4 (d2).
template <class T>
Vec<T> holonomy(const SyntheticConnection<T>& conn, const InfinitesimalTwoChain<T>& chain,
                const TangentVector<T>& t3) {
  detail::require_same_base(chain.square.base, t3.base, conn.tolerance(), "holonomy");
  const auto edges = contour(chain);
  auto v = transport_p(conn, edges[0], chain.d1, t3);
  v = transport_p(conn, edges[1], chain.d2, v);
  v = transport_q(conn, edges[2], chain.d1, v);
  v = transport_q(conn, edges[3], chain.d2, v);
  for (std::size_t i = 0; i < v.vel.size(); ++i) v.vel[i] -= t3.vel[i];
  return std::move(v.vel);
}

class LowerOrderTermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest coefficient of the holonomy difference off the d1·d2 slot.
template <class T>
double lower_order_residual(const Vec<T>& diff) {
  double worst = 0.0;
  for (const auto& x : diff) {
    for (const auto& [e, c] : x.terms()) {
      if (e[0] == 1 && e[1] == 1) continue;
      worst = std::max(worst, weil::ScalarTraits<T>::magnitude(c));
    }
  }
  return worst;
}

/// The unique v with diff = d1·d2·v. Components are returned in the working
/// algebra with no d1, d2 dependence. Throws LowerOrderTermError if diff
/// has a coefficient off the d1·d2 slot above `tol` (nonzero at all for
/// exact scalars).
template <class T>
Vec<T> extract_rtilde(const Vec<T>& diff, double tol = weil::kDefaultTolerance) {
  Vec<T> out;
  out.reserve(diff.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    const auto& x = diff[i];
    typename Elem<T>::Terms slot;
    for (const auto& [e, c] : x.terms()) {
      if (e[0] == 1 && e[1] == 1) {
        auto stripped = e;
        stripped[0] = stripped[1] = 0;
        slot.emplace(std::move(stripped), c);
      } else if (!weil::ScalarTraits<T>::near_zero(c, tol)) {
        throw LowerOrderTermError(fmt::format(
            "holonomy component {} has coefficient {} off the d1*d2 slot (tolerance {})", i,
            weil::ScalarTraits<T>::to_string(c), tol));
      }
    }
    out.emplace_back(x.spec(), slot);
  }
  return out;
}

/// ℛ(t1,t2)(t3) = ℛ̃(∇(t1,t2))(t3).
template <class T>
TangentVector<T> riemann_synthetic(const SyntheticConnection<T>& conn, const TangentVector<T>& t1,
                                   const TangentVector<T>& t2, const TangentVector<T>& t3) {
  const auto chain = square_chain(nabla(conn, t1, t2));
  return {t3.base, extract_rtilde(holonomy(conn, chain, t3), conn.tolerance())};
}

/// Components of constant elements as scalars.
template <class T>
std::vector<T> augmentations(const Vec<T>& v) {
  std::vector<T> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.augmentation());
  return out;
}

}  // namespace nilgeom::sdg

#include "nilgeom/manifold/chart.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace nilgeom::manifold {

namespace {

constexpr int kClosedFormMaxOrder = 16;
constexpr int kFiniteDifferenceMaxOrder = 2;

// x_i + ε_i over the jet algebra D_order(n).
std::vector<Jet> jet_point(std::span<const double> x, int order) {
  const auto spec = weil::InfinitesimalSpec::DkOfN(order, static_cast<int>(x.size()));
  std::vector<Jet> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.push_back(Jet::constant(spec, x[i]) + Jet::generator(spec, i));
  }
  return out;
}

Eigen::MatrixXd to_matrix(const std::vector<double>& flat, std::size_t n) {
  if (flat.size() != n * n) throw std::logic_error("metric callable returned wrong size");
  Eigen::MatrixXd g(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) g(r, c) = flat[r * n + c];
  }
  return g;
}

Point shifted(std::span<const double> x, std::size_t a, double h) {
  Point y(x.begin(), x.end());
  y[a] += h;
  return y;
}

Point shifted(std::span<const double> x, std::size_t a, double ha, std::size_t b, double hb) {
  Point y(x.begin(), x.end());
  y[a] += ha;
  y[b] += hb;
  return y;
}

}  // namespace

Chart::Chart(Definition def, DerivativeMode mode)
    : Chart(std::make_shared<const Definition>(std::move(def)), mode) {}

Chart::Chart(std::shared_ptr<const Definition> def, DerivativeMode mode)
    : def_(std::move(def)), mode_(mode) {
  if (def_->dim == 0) throw std::invalid_argument("chart dimension must be >= 1");
  if (!def_->metric) throw std::invalid_argument("chart needs a metric");
  if (!def_->domain) throw std::invalid_argument("chart needs a domain predicate");
}

Chart Chart::from_metric(std::string name, std::size_t dim, Field<double> metric,
                         std::function<bool(std::span<const double>)> domain) {
  Definition def;
  def.name = std::move(name);
  def.dim = dim;
  def.metric = std::move(metric);
  def.domain = std::move(domain);
  return Chart(std::move(def), DerivativeMode::kFiniteDifference);
}

Chart Chart::with_mode(DerivativeMode mode) const { return Chart(def_, mode); }

bool Chart::contains(std::span<const double> x) const {
  return x.size() == dim() && def_->domain(x);
}

void Chart::require_contains(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw ChartDomainError(
        fmt::format("chart {} has dimension {}, point has {} coordinates", name(), dim(), x.size()));
  }
  if (!def_->domain(x)) {
    throw ChartDomainError(
        fmt::format("point ({}) is outside the domain of chart {}", fmt::join(x, ", "), name()));
  }
}

Eigen::MatrixXd Chart::metric(std::span<const double> x) const {
  require_contains(x);
  return to_matrix(def_->metric(x), dim());
}

std::vector<Eigen::MatrixXd> Chart::metric_partials(std::span<const double> x) const {
  require_contains(x);
  const std::size_t n = dim();
  std::vector<Eigen::MatrixXd> out(n, Eigen::MatrixXd::Zero(n, n));
  if (mode_ == DerivativeMode::kClosedForm && def_->metric_jet) {
    const auto jx = jet_point(x, 1);
    const auto g = def_->metric_jet(jx);
    for (std::size_t m = 0; m < n; ++m) {
      weil::Exponent e(n, 0);
      e[m] = 1;
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) out[m](r, c) = g[r * n + c].coefficient(e);
      }
    }
    return out;
  }
  const double h = kFirstDerivativeStep;
  for (std::size_t m = 0; m < n; ++m) {
    const auto plus = def_->metric(shifted(x, m, h));
    const auto minus = def_->metric(shifted(x, m, -h));
    out[m] = (to_matrix(plus, n) - to_matrix(minus, n)) / (2 * h);
  }
  return out;
}

bool Chart::closed_form_christoffel() const {
  return mode_ == DerivativeMode::kClosedForm && def_->christoffel && def_->christoffel_jet;
}

int Chart::max_christoffel_order() const {
  return closed_form_christoffel() ? kClosedFormMaxOrder : kFiniteDifferenceMaxOrder;
}

Christoffel Chart::christoffel(std::span<const double> x) const {
  require_contains(x);
  if (closed_form_christoffel()) {
    Christoffel out{dim(), def_->christoffel(x)};
    if (out.data.size() != dim() * dim() * dim()) {
      throw std::logic_error("christoffel callable returned wrong size");
    }
    return out;
  }
  return christoffel_from_metric(*this, x);
}

std::vector<weil::TaylorPolynomial<double>> Chart::christoffel_taylor(std::span<const double> x,
                                                                      int order) const {
  require_contains(x);
  if (order < 0) throw std::invalid_argument("negative Taylor order");
  const std::size_t n = dim();
  const std::size_t count = n * n * n;
  if (order == 0) {
    const auto gamma = christoffel(x);
    std::vector<weil::TaylorPolynomial<double>> out(count, {n, {}});
    for (std::size_t idx = 0; idx < count; ++idx) {
      if (gamma.data[idx] != 0.0) out[idx].coeffs.emplace(weil::Exponent(n, 0), gamma.data[idx]);
    }
    return out;
  }
  if (!closed_form_christoffel()) return christoffel_taylor_fd(x, order);
  const auto jets = def_->christoffel_jet(jet_point(x, order));
  std::vector<weil::TaylorPolynomial<double>> out;
  out.reserve(count);
  for (const auto& j : jets) out.push_back({n, j.terms()});
  return out;
}

std::vector<weil::TaylorPolynomial<double>> Chart::christoffel_taylor_fd(std::span<const double> x,
                                                                         int order) const {
  if (order > kFiniteDifferenceMaxOrder) {
    throw std::invalid_argument(
        fmt::format("chart {}: finite differences supply Christoffel derivatives up to order {}, "
                    "{} requested",
                    name(), kFiniteDifferenceMaxOrder, order));
  }
  const std::size_t n = dim();
  const std::size_t count = n * n * n;
  auto gamma = [&](const Point& p) { return christoffel_from_metric(*this, p).data; };
  const double h = kSecondDerivativeStep;

  std::vector<weil::TaylorPolynomial<double>> out(count, {n, {}});
  auto put = [&](const weil::Exponent& e, const std::vector<double>& values, double scale) {
    for (std::size_t idx = 0; idx < count; ++idx) {
      const double v = values[idx] * scale;
      if (v != 0.0) out[idx].coeffs[e] = v;
    }
  };
  const Point x0(x.begin(), x.end());
  const auto g0 = gamma(x0);
  put(weil::Exponent(n, 0), g0, 1.0);

  for (std::size_t a = 0; a < n; ++a) {
    const auto gp = gamma(shifted(x, a, h));
    const auto gm = gamma(shifted(x, a, -h));
    std::vector<double> d1(count), d2(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      d1[idx] = (gp[idx] - gm[idx]) / (2 * h);
      d2[idx] = (gp[idx] - 2 * g0[idx] + gm[idx]) / (h * h);
    }
    weil::Exponent e(n, 0);
    e[a] = 1;
    put(e, d1, 1.0);
    if (order >= 2) {
      e[a] = 2;
      put(e, d2, 0.5);
    }
  }
  if (order >= 2) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const auto pp = gamma(shifted(x, a, h, b, h));
        const auto pm = gamma(shifted(x, a, h, b, -h));
        const auto mp = gamma(shifted(x, a, -h, b, h));
        const auto mm = gamma(shifted(x, a, -h, b, -h));
        std::vector<double> dab(count);
        for (std::size_t idx = 0; idx < count; ++idx) {
          dab[idx] = (pp[idx] - pm[idx] - mp[idx] + mm[idx]) / (4 * h * h);
        }
        weil::Exponent e(n, 0);
        e[a] = 1;
        e[b] = 1;
        put(e, dab, 1.0);
      }
    }
  }
  return out;
}

weil::SmoothField<double> Chart::christoffel_field(std::size_t i, std::size_t j,
                                                   std::size_t k) const {
  const std::size_t n = dim();
  if (i >= n || j >= n || k >= n) throw std::out_of_range("christoffel_field: index out of range");
  const std::size_t idx = (i * n + j) * n + k;
  Chart self = *this;
  return {n, max_christoffel_order(),
          [self, idx](std::span<const double> x, std::span<const int> alpha) {
            const int order = weil::total_degree(alpha);
            const auto polys = self.christoffel_taylor(x, order);
            const auto& coeffs = polys[idx].coeffs;
            const auto it = coeffs.find(weil::Exponent(alpha.begin(), alpha.end()));
            if (it == coeffs.end()) return 0.0;
            return it->second * static_cast<double>(weil::multi_factorial(alpha));
          }};
}

Christoffel christoffel_from_metric(const Chart& chart, std::span<const double> x) {
  const std::size_t n = chart.dim();
  const Point p(x.begin(), x.end());
  const Eigen::MatrixXd g = chart.metric(p);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible()) {
    throw std::domain_error(fmt::format("metric of chart {} is singular at ({})", chart.name(),
                                        fmt::join(p, ", ")));
  }
  const Eigen::MatrixXd ginv = lu.inverse();
  const auto dg = chart.metric_partials(p);
  Christoffel out{n, std::vector<double>(n * n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          sum += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        }
        out.data[(i * n + j) * n + k] = 0.5 * sum;
      }
    }
  }
  return out;
}

}  // namespace nilgeom::manifold

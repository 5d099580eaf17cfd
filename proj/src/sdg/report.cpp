#include "nilgeom/sdg/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace nilgeom::sdg {

namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> classical_contraction(const manifold::RiemannTensor& r,
                                          std::span<const double> t1, std::span<const double> t2,
                                          std::span<const double> t3) {
  auto out = manifold::contract(r, t3, t1, t2);
  for (auto& v : out) v = 0.0 - v;  // no negative zeros in reports
  return out;
}

std::vector<double> synthetic_curvature(const SyntheticConnection<double>& conn,
                                        std::span<const double> x, std::span<const double> t1,
                                        std::span<const double> t2, std::span<const double> t3) {
  const auto spec = square_algebra();
  const auto v1 = make_tangent<double>(spec, x, t1);
  const auto v2 = make_tangent<double>(spec, x, t2);
  const auto v3 = make_tangent<double>(spec, x, t3);
  return augmentations(riemann_synthetic(conn, v1, v2, v3).vel);
}

double synthetic_scalar_curvature(const SyntheticConnection<double>& conn,
                                  const manifold::Chart& chart, std::span<const double> x) {
  const std::size_t n = chart.dim();
  const Eigen::MatrixXd ginv = chart.metric(x).inverse();
  auto basis = [n](std::size_t i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    return e;
  };
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t j = 0; j < n; ++j) {
        const double w = ginv(j, l);
        if (w == 0.0) continue;
        s -= w * synthetic_curvature(conn, x, basis(i), basis(l), basis(j))[i];
      }
    }
  }
  return s;
}

ComparisonRecord compare_curvature(const manifold::Chart& chart, std::span<const double> x,
                                   std::span<const double> t1, std::span<const double> t2,
                                   std::span<const double> t3) {
  return compare_curvature(chart, chart_connection(chart), x, t1, t2, t3);
}

ComparisonRecord compare_curvature(const manifold::Chart& chart,
                                   const SyntheticConnection<double>& conn,
                                   std::span<const double> x, std::span<const double> t1,
                                   std::span<const double> t2, std::span<const double> t3) {
  ComparisonRecord rec;
  rec.point.assign(x.begin(), x.end());
  rec.synthetic = synthetic_curvature(conn, x, t1, t2, t3);
  const auto oracle =
      manifold::classical_riemann(chart.with_mode(manifold::DerivativeMode::kClosedForm), x);
  rec.classical = classical_contraction(oracle.riemann, t1, t2, t3);
  for (std::size_t i = 0; i < rec.synthetic.size(); ++i) {
    rec.abs_err = std::max(rec.abs_err, std::abs(rec.synthetic[i] - rec.classical[i]));
  }
  const double scale = std::max(sup_norm(rec.classical), sup_norm(oracle.riemann.data) *
                                                             sup_norm(t1) * sup_norm(t2) *
                                                             sup_norm(t3));
  rec.rel_err = scale > 0.0 ? rec.abs_err / scale : rec.abs_err;
  return rec;
}

ComparisonReport compare_curvature(const manifold::Chart& chart,
                                   const std::vector<manifold::Point>& points,
                                   std::span<const double> t1, std::span<const double> t2,
                                   std::span<const double> t3) {
  ComparisonReport report;
  report.chart = chart.name();
  report.mode = chart.mode() == manifold::DerivativeMode::kClosedForm ? "closed_form"
                                                                      : "finite_difference";
  report.t1.assign(t1.begin(), t1.end());
  report.t2.assign(t2.begin(), t2.end());
  report.t3.assign(t3.begin(), t3.end());
  for (const auto& x : points) report.records.push_back(compare_curvature(chart, x, t1, t2, t3));
  return report;
}

double ComparisonReport::max_rel_err() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.rel_err);
  return m;
}

nlohmann::json to_json(const ComparisonReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    records.push_back({{"point", r.point},
                       {"synthetic", r.synthetic},
                       {"classical", r.classical},
                       {"abs_err", r.abs_err},
                       {"rel_err", r.rel_err}});
  }
  return {{"chart", report.chart},
          {"mode", report.mode},
          {"t1", report.t1},
          {"t2", report.t2},
          {"t3", report.t3},
          {"convention", "synthetic = -R^i_jkl t3^j t1^k t2^l"},
          {"max_rel_err", report.max_rel_err()},
          {"records", std::move(records)}};
}

std::string to_csv(const ComparisonReport& report) {
  std::string out = "point,component,synthetic,classical,abs_err,rel_err\n";
  for (const auto& r : report.records) {
    const auto point = fmt::format("{:.17g}", fmt::join(r.point, ";"));
    for (std::size_t i = 0; i < r.synthetic.size(); ++i) {
      out += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", point, i, r.synthetic[i],
                         r.classical[i], r.abs_err, r.rel_err);
    }
  }
  return out;
}

}  // namespace nilgeom::sdg

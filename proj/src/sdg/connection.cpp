#include "nilgeom/sdg/connection.hpp"

#include <fmt/format.h>

namespace nilgeom::sdg {

Vec<double> ChartChristoffel::evaluate(std::span<const Elem<double>> x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument(
        fmt::format("chart {} has dimension {}, point has {}", chart_.name(), dim(), x.size()));
  }
  const auto& spec = x.front().spec();
  manifold::Point x0;
  Vec<double> eps;
  for (const auto& xi : x) {
    x0.push_back(xi.augmentation());
    eps.push_back(xi.nilpotent_part());
  }
  chart_.require_contains(x0);
  const int order = spec.max_total_degree();
  if (order > chart_.max_christoffel_order()) {
    throw std::invalid_argument(fmt::format(
        "chart {} supplies Christoffel derivatives up to order {}, the algebra {} needs {}",
        chart_.name(), chart_.max_christoffel_order(), spec.to_string(), order));
  }

  std::shared_ptr<const Cached> cached;
  {
    std::lock_guard lock(mutex_);
    cached = cache_;
  }
  if (!cached || cached->order != order || cached->x0 != x0) {
    auto fresh = std::make_shared<Cached>();
    fresh->x0 = x0;
    fresh->order = order;
    fresh->taylor = chart_.christoffel_taylor(x0, order);
    cached = fresh;
    std::lock_guard lock(mutex_);
    cache_ = cached;
  }

  weil::MonomialPowers<double> powers(eps);
  Vec<double> out;
  out.reserve(cached->taylor.size());
  for (const auto& p : cached->taylor) out.push_back(weil::substitute(p, powers));
  return out;
}

SyntheticConnection<double> chart_connection(const manifold::Chart& chart) {
  return SyntheticConnection<double>(std::make_shared<ChartChristoffel>(chart));
}

}  // namespace nilgeom::sdg

#include "nilgeom/hybrid/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "nilgeom/manifold/classical.hpp"
#include "nilgeom/weil/serialization.hpp"

namespace nilgeom::hybrid {

namespace {

constexpr const char* kCitation =
    "Structural conclusion, not a computed fact: an evolution of S3 x R that switches description "
    "at the scale h needs an atlas of R4 with at least two coordinate patches, no such atlas is "
    "smoothly equivalent to a single global chart, and the resulting smooth structure is exotic. "
    "The curvature of an exotic R4 cannot be removed by any diffeomorphism.";

double scalar_curvature(double rho, const HybridConfig& cfg, DivisionCounter* counter) {
  if (counter) {
    ++counter->total;
    if (rho <= cfg.h) ++counter->at_or_below_h;
  }
  return 6.0 / (rho * rho);
}

// The SET value must agree with the coordinate formula on sphere3(ρ).
void cross_check(double rho, double value) {
  const auto chart = manifold::catalog("sphere3", {.radius = rho});
  const manifold::Point x{1.0, 1.0, 1.0};
  const double oracle = manifold::classical_riemann(chart, x).scalar_curvature;
  if (std::abs(oracle - value) > 1e-8 * std::abs(value)) {
    throw std::logic_error(
        fmt::format("SET curvature {} disagrees with the sphere3 oracle {}", value, oracle));
  }
}

}  // namespace

std::string_view regime_name(Regime r) { return r == Regime::kSet ? "SET" : "G"; }

void validate(const HybridConfig& cfg) {
  auto fail = [](std::string msg) { throw std::invalid_argument(std::move(msg)); };
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) fail(fmt::format("h must be positive, got {}", cfg.h));
  if (cfg.order_k < 1) fail(fmt::format("order_k must be >= 1, got {}", cfg.order_k));
  if (cfg.m < 4 || cfg.m > 8) fail(fmt::format("m must lie in 4..8, got {}", cfg.m));
  if (!std::isfinite(cfg.tau_min) || !std::isfinite(cfg.tau_max) || !(cfg.tau_min < cfg.tau_max)) {
    fail(fmt::format("tau range needs tau_min < tau_max, got [{}, {}]", cfg.tau_min, cfg.tau_max));
  }
  if (cfg.steps < 2) fail(fmt::format("steps must be >= 2, got {}", cfg.steps));
  shrink_profile(cfg.shrink_profile);
  if (!(cfg.eps1() > 0.0)) fail(fmt::format("epsilon1 must be positive, got {}", cfg.eps1()));
  if (!(cfg.eps2() > 0.0)) fail(fmt::format("epsilon2 must be positive, got {}", cfg.eps2()));
  if (!(cfg.eps2() < cfg.h)) {
    fail(fmt::format("epsilon2 must be smaller than h ({} >= {})", cfg.eps2(), cfg.h));
  }
}

std::function<double(double)> shrink_profile(const std::string& name) {
  if (name == "abs") return [](double tau) { return std::abs(tau); };
  if (name == "quadratic") return [](double tau) { return tau * tau; };
  throw std::invalid_argument(
      fmt::format("unknown shrink profile '{}' (expected abs or quadratic)", name));
}

Regime regime_of(double rho, const HybridConfig& cfg) {
  if (!(rho >= 0.0)) throw std::invalid_argument(fmt::format("rho must be >= 0, got {}", rho));
  return rho <= cfg.h ? Regime::kG : Regime::kSet;
}

weil::WeilElement<double> g_regime_curvature(const HybridConfig& cfg) {
  const auto spec = weil::InfinitesimalSpec::DkOfN(cfg.order_k, cfg.m);
  const double share = 6.0 / (cfg.h * cfg.h) / cfg.m;
  weil::WeilElement<double> out(spec);
  for (int i = 0; i < cfg.m; ++i) {
    out += share * weil::WeilElement<double>::generator(spec, static_cast<std::size_t>(i));
  }
  return out;
}

HybridState step_state(double tau, const HybridConfig& cfg, DivisionCounter* counter) {
  if (!(tau >= cfg.tau_min && tau <= cfg.tau_max)) {
    throw std::invalid_argument(
        fmt::format("tau {} outside [{}, {}]", tau, cfg.tau_min, cfg.tau_max));
  }
  HybridState s;
  s.tau = tau;
  s.rho = shrink_profile(cfg.shrink_profile)(tau);
  s.regime = regime_of(s.rho, cfg);
  s.side = tau < 0.0 ? "negative" : "positive";
  if (s.regime == Regime::kSet) {
    const double value = scalar_curvature(s.rho, cfg, counter);
    cross_check(s.rho, value);
    s.curvature = value;
  } else {
    s.curvature = g_regime_curvature(cfg);
  }
  return s;
}

AtlasReport atlas_report(const HybridConfig& cfg) {
  const double lo = cfg.h - cfg.eps2(), hi = cfg.h + cfg.eps1();
  AtlasReport a;
  a.patches = {
      {"R4_lt_h", std::nullopt, hi, fmt::format("S3 x (-inf, {:.17g})", hi)},
      {"R4_gt_h", lo, std::nullopt, fmt::format("S3 x ({:.17g}, inf)", lo)},
  };
  a.overlap_lo = lo;
  a.overlap_hi = hi;
  a.single_global_chart = false;
  a.exotic_marker = true;
  a.citation = kCitation;
  return a;
}

std::vector<double> tau_grid(const HybridConfig& cfg) {
  std::vector<double> out(static_cast<std::size_t>(cfg.steps));
  const double span = cfg.tau_max - cfg.tau_min;
  for (int i = 0; i < cfg.steps; ++i) {
    out[static_cast<std::size_t>(i)] =
        i == cfg.steps - 1 ? cfg.tau_max : cfg.tau_min + span * i / (cfg.steps - 1);
  }
  return out;
}

SimulationResult simulate(const HybridConfig& cfg) {
  validate(cfg);
  SimulationResult r;
  for (double tau : tau_grid(cfg)) r.timeline.push_back(step_state(tau, cfg, &r.divisions));
  r.atlas = atlas_report(cfg);
  return r;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string timeline_csv(const std::vector<HybridState>& timeline) {
  std::string out = "tau,rho,regime,curvature_scalar,curvature_weil_json,side\n";
  for (const auto& s : timeline) {
    std::string scalar, weil_json;
    if (const auto* v = std::get_if<double>(&s.curvature)) {
      scalar = fmt::format("{:.17g}", *v);
    } else {
      weil_json = csv_quote(weil::to_json(std::get<weil::WeilElement<double>>(s.curvature)).dump());
    }
    out += fmt::format("{:.17g},{:.17g},{},{},{},{}\n", s.tau, s.rho, regime_name(s.regime), scalar,
                       weil_json, s.side);
  }
  return out;
}

nlohmann::json to_json(const AtlasReport& atlas) {
  nlohmann::json patches = nlohmann::json::array();
  for (const auto& p : atlas.patches) {
    patches.push_back({{"name", p.name},
                       {"lower", p.lower ? nlohmann::json(*p.lower) : nlohmann::json()},
                       {"upper", p.upper ? nlohmann::json(*p.upper) : nlohmann::json()},
                       {"description", p.description}});
  }
  return {{"patches", std::move(patches)},
          {"overlap", {atlas.overlap_lo, atlas.overlap_hi}},
          {"single_global_chart", atlas.single_global_chart},
          {"exotic_marker", atlas.exotic_marker},
          {"citation", atlas.citation}};
}

nlohmann::json to_json(const HybridConfig& cfg) {
  return {{"h", cfg.h},
          {"order_k", cfg.order_k},
          {"m", cfg.m},
          {"tau_min", cfg.tau_min},
          {"tau_max", cfg.tau_max},
          {"steps", cfg.steps},
          {"shrink_profile", cfg.shrink_profile},
          {"epsilon1", cfg.eps1()},
          {"epsilon2", cfg.eps2()}};
}

nlohmann::json timeline_json(const SimulationResult& result, const HybridConfig& cfg) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : result.timeline) {
    nlohmann::json j{{"tau", s.tau},
                     {"rho", s.rho},
                     {"regime", regime_name(s.regime)},
                     {"curvature_scalar", nullptr},
                     {"curvature_weil", nullptr},
                     {"side", s.side}};
    if (const auto* v = std::get_if<double>(&s.curvature)) {
      j["curvature_scalar"] = *v;
    } else {
      j["curvature_weil"] = weil::to_json(std::get<weil::WeilElement<double>>(s.curvature));
    }
    samples.push_back(std::move(j));
  }
  return {{"config", to_json(cfg)},
          {"timeline", std::move(samples)},
          {"divisions_at_or_below_h", result.divisions.at_or_below_h},
          {"atlas", to_json(result.atlas)}};
}

}  // namespace nilgeom::hybrid

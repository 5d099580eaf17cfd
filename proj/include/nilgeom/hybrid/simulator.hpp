#pragma once

// A shrinking S³×R universe sampled on a τ grid. Above the scale h the
// scalar curvature of S³(ρ) is a real number; at or below h it is carried
// by a nilpotent element of D_k(m), so nothing ever divides by a small ρ.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "nilgeom/weil/element.hpp"

namespace nilgeom::hybrid {

enum class Regime { kSet, kG };

std::string_view regime_name(Regime r);

struct HybridConfig {
  double h = 0.5;
  int order_k = 2;
  int m = 4;
  double tau_min = -2.0;
  double tau_max = 2.0;
  int steps = 9;
  /// "abs" (ρ = |τ|) or "quadratic" (ρ = τ²).
  std::string shrink_profile = "abs";
  /// Patch-overlap margins; h/10 when unset.
  std::optional<double> epsilon1;
  std::optional<double> epsilon2;

  double eps1() const { return epsilon1.value_or(h / 10); }
  double eps2() const { return epsilon2.value_or(h / 10); }
};

/// Throws std::invalid_argument naming the offending field.
void validate(const HybridConfig& cfg);

/// ρ(τ) for a named profile.
std::function<double(double)> shrink_profile(const std::string& name);

/// Counts every division by ρ, and separately those with ρ <= h.
struct DivisionCounter {
  long total = 0;
  long at_or_below_h = 0;
};

using Curvature = std::variant<double, weil::WeilElement<double>>;

struct HybridState {
  double tau = 0.0;
  double rho = 0.0;
  Regime regime = Regime::kSet;
  Curvature curvature = 0.0;
  /// "negative" for τ < 0, else "positive".
  std::string side;
};

/// G iff rho <= h. Throws std::invalid_argument for negative rho.
Regime regime_of(double rho, const HybridConfig& cfg);

/// The G-regime representative: the SET value at ρ = h spread evenly over
/// the m degree-1 monomials of D_k(m). Zero augmentation by construction.
weil::WeilElement<double> g_regime_curvature(const HybridConfig& cfg);

HybridState step_state(double tau, const HybridConfig& cfg, DivisionCounter* counter = nullptr);

struct Patch {
  std::string name;
  std::optional<double> lower;  // unset = −∞
  std::optional<double> upper;  // unset = +∞
  std::string description;
};

struct AtlasReport {
  std::vector<Patch> patches;
  double overlap_lo = 0.0;
  double overlap_hi = 0.0;
  bool single_global_chart = false;
  bool exotic_marker = true;
  std::string citation;
};

AtlasReport atlas_report(const HybridConfig& cfg);

struct SimulationResult {
  std::vector<HybridState> timeline;
  AtlasReport atlas;
  DivisionCounter divisions;
};

/// Uniform τ grid of cfg.steps samples including both endpoints.
std::vector<double> tau_grid(const HybridConfig& cfg);

SimulationResult simulate(const HybridConfig& cfg);

/// Columns tau, rho, regime, curvature_scalar, curvature_weil_json, side.
std::string timeline_csv(const std::vector<HybridState>& timeline);
nlohmann::json timeline_json(const SimulationResult& result, const HybridConfig& cfg);
nlohmann::json to_json(const AtlasReport& atlas);
nlohmann::json to_json(const HybridConfig& cfg);

}  // namespace nilgeom::hybrid

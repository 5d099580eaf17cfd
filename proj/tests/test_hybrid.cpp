#include <cmath>

#include "doctest.h"
#include "nilgeom/hybrid/simulator.hpp"

using namespace nilgeom::hybrid;

namespace {

std::vector<std::string> regimes(const SimulationResult& r) {
  std::vector<std::string> out;
  for (const auto& s : r.timeline) out.emplace_back(regime_name(s.regime));
  return out;
}

}  // namespace

TEST_CASE("regime boundary belongs to G") {
  HybridConfig cfg;
  cfg.h = 0.1;
  CHECK(regime_of(0.2, cfg) == Regime::kSet);
  CHECK(regime_of(0.05, cfg) == Regime::kG);
  CHECK(regime_of(0.1, cfg) == Regime::kG);
  CHECK(regime_of(0.0, cfg) == Regime::kG);
  CHECK_THROWS_AS(regime_of(-0.1, cfg), std::invalid_argument);
}

TEST_CASE("step_state in both regimes") {
  HybridConfig cfg;
  cfg.h = 0.1;
  DivisionCounter counter;
  const auto set = step_state(1.0, cfg, &counter);
  CHECK(set.regime == Regime::kSet);
  CHECK(std::get<double>(set.curvature) == 6.0);
  CHECK(counter.total == 1);

  const auto g = step_state(0.0, cfg, &counter);
  CHECK(g.regime == Regime::kG);
  const auto& w = std::get<nilgeom::weil::WeilElement<double>>(g.curvature);
  CHECK(w.augmentation() == 0.0);
  CHECK(nilgeom::weil::is_infinitesimal(w, 0.0));
  CHECK(w.size() == 4);
  CHECK(counter.total == 1);
  CHECK(counter.at_or_below_h == 0);

  CHECK(step_state(0.1, cfg).regime == Regime::kG);
  CHECK(step_state(-0.1, cfg).side == "negative");
  CHECK(step_state(0.0, cfg).side == "positive");
  CHECK_THROWS_AS(step_state(5.0, cfg), std::invalid_argument);
}

TEST_CASE("G-regime representative") {
  HybridConfig cfg;
  cfg.h = 0.5;
  cfg.m = 6;
  cfg.order_k = 3;
  const auto w = g_regime_curvature(cfg);
  CHECK(w.spec() == nilgeom::weil::InfinitesimalSpec::DkOfN(3, 6));
  double sum = 0.0;
  for (const auto& [e, c] : w.terms()) {
    CHECK(nilgeom::weil::total_degree(e) == 1);
    sum += c;
  }
  CHECK(sum == doctest::Approx(24.0));
  CHECK(nilgeom::weil::nilpotency_order(w) == 4);
}

TEST_CASE("reference run") {
  HybridConfig cfg;
  cfg.h = 0.5;
  cfg.tau_min = -2;
  cfg.tau_max = 2;
  cfg.steps = 9;
  const auto r = simulate(cfg);
  CHECK(regimes(r) ==
        std::vector<std::string>{"SET", "SET", "SET", "G", "G", "G", "SET", "SET", "SET"});
  CHECK(r.divisions.at_or_below_h == 0);
  CHECK(r.divisions.total == 6);
  for (const auto& s : r.timeline) {
    CHECK((s.regime == Regime::kG) == (s.rho <= cfg.h));
    if (s.regime == Regime::kG) {
      CHECK(std::get<nilgeom::weil::WeilElement<double>>(s.curvature).augmentation() == 0.0);
    }
  }
  CHECK(r.atlas.patches.size() == 2);
  CHECK(r.atlas.overlap_lo < r.atlas.overlap_hi);
  CHECK_FALSE(r.atlas.single_global_chart);
  CHECK(r.atlas.exotic_marker);
  CHECK(r.atlas.overlap_lo == doctest::Approx(0.45));
  CHECK(r.atlas.overlap_hi == doctest::Approx(0.55));
}

TEST_CASE("SET curvature grows as the diameter shrinks") {
  HybridConfig cfg;
  cfg.h = 0.3;
  cfg.tau_min = 0.0;
  cfg.tau_max = 3.0;
  cfg.steps = 31;
  const auto r = simulate(cfg);
  double previous = 0.0;
  for (auto it = r.timeline.rbegin(); it != r.timeline.rend(); ++it) {
    if (it->regime != Regime::kSet) break;
    const double v = std::get<double>(it->curvature);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("simulation edge cases") {
  HybridConfig cfg;
  cfg.h = 10.0;
  cfg.epsilon2 = 1.0;
  auto r = simulate(cfg);
  for (const auto& s : r.timeline) CHECK(s.regime == Regime::kG);
  CHECK(r.atlas.patches.size() == 2);

  cfg = {};
  cfg.steps = 2;
  r = simulate(cfg);
  CHECK(r.timeline.size() == 2);
  CHECK(r.timeline.front().tau == -2.0);
  CHECK(r.timeline.back().tau == 2.0);

  cfg = {};
  cfg.shrink_profile = "quadratic";
  cfg.steps = 5;
  r = simulate(cfg);
  CHECK(r.timeline[1].rho == 1.0);
}

TEST_CASE("config validation") {
  auto bad = [](auto edit) {
    HybridConfig cfg;
    edit(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.steps = 1; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.h = 0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.m = 3; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.m = 9; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.order_k = 0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.tau_min = 3; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.shrink_profile = "cubic"; })),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.epsilon2 = 0.6; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.epsilon1 = -1; })), std::invalid_argument);
  CHECK_NOTHROW(validate(HybridConfig{}));
}

TEST_CASE("timeline and atlas serialization") {
  HybridConfig cfg;
  cfg.h = 0.5;
  const auto r = simulate(cfg);
  const auto csv = timeline_csv(r.timeline);
  CHECK(csv.rfind("tau,rho,regime,curvature_scalar,curvature_weil_json,side\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  CHECK(csv.find("-2,2,SET,1.5,,negative\n") != std::string::npos);
  CHECK(csv.find("0,0,G,,\"{") != std::string::npos);

  const auto atlas = to_json(r.atlas);
  CHECK(atlas["patches"].size() == 2);
  CHECK(atlas["patches"][0]["name"] == "R4_lt_h");
  CHECK(atlas["patches"][1]["name"] == "R4_gt_h");
  CHECK(atlas["overlap"].size() == 2);
  CHECK(atlas["single_global_chart"] == false);
  CHECK(atlas["exotic_marker"] == true);
  CHECK_FALSE(atlas["citation"].get<std::string>().empty());

  const auto j = timeline_json(r, cfg);
  CHECK(j["timeline"].size() == 9);
  CHECK(j["timeline"][0]["curvature_scalar"] == 1.5);
  CHECK(j["timeline"][4]["curvature_weil"].is_object());
  CHECK(j["timeline"][4]["curvature_scalar"].is_null());
  CHECK(j["divisions_at_or_below_h"] == 0);
  CHECK(timeline_json(simulate(cfg), cfg).dump() == j.dump());
}

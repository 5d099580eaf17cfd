#pragma once

// Randomized property checks shared by `nilgeom selftest` and the
// acceptance gate. Each check is deterministic for a given seed and returns
// counts rather than aborting, so callers can print a summary.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nilgeom/manifold/chart.hpp"

namespace nilgeom::check {

struct Outcome {
  std::string name;
  long cases = 0;
  long failures = 0;
  /// Largest observed error for tolerance-based checks (0 otherwise).
  double worst = 0.0;
  std::string summary;
  /// The first few failure descriptions.
  std::vector<std::string> notes;

  bool passed() const { return failures == 0 && cases > 0; }
};

struct Options {
  std::uint64_t seed = 20240601;
  /// Runs synthetic checks with a connection whose nabla has the wrong sign.
  bool sign_fault = false;
};

/// euclidean(2..4), sphere2 and sphere3 with radius 0.5, 1, 2.
std::vector<manifold::Chart> catalog_charts();
manifold::Point random_interior(const manifold::Chart& chart, std::mt19937_64& rng);

Outcome algebra_laws(int cases_per_kind, const Options& opt);
Outcome containment_chain(int max_n, int max_k, int degree_bound);
Outcome kl_uniqueness(int random_polynomials, int max_nk, const Options& opt);
Outcome classical_oracle(int points_per_chart, const Options& opt);
Outcome connection_identities(int fibers, const Options& opt);
Outcome holonomy_structure(int configs_per_chart, const Options& opt);
Outcome oracle_equivalence(int points_per_chart, const Options& opt);
Outcome tensor_symmetries(int points_per_chart, const Options& opt);
Outcome infinitesimal_curvature(int configs, const Options& opt);
Outcome hybrid_reference();
Outcome hybrid_invariants();
Outcome microlinearity(const Options& opt);

struct Suite {
  std::string name;
  std::vector<Outcome> outcomes;

  bool passed() const;
  long cases() const;
  long failures() const;
};

/// weil, manifold, sdg, holonomy, hybrid.
const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown name.
Suite run_suite(std::string_view name, const Options& opt);

}  // namespace nilgeom::check

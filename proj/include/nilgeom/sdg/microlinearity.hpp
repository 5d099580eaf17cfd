#pragma once

// Finite checks of microlinearity on the working algebras: coefficient
// counts, restriction D(2) ↪ D×D, and the pullback square that glues two
// maps D → R agreeing at 0 into a unique map D(2) → R.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nilgeom/weil/element.hpp"

namespace nilgeom::sdg {

struct MicrolinearityCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct MicrolinearityReport {
  std::vector<MicrolinearityCheck> checks;
  bool all_passed() const;
};

using weil::Rational;

/// The map D(2) → R restricting to g1 on the first axis and g2 on the
/// second, found by solving the coefficient system. Empty when the system
/// has no solution (g1(0) ≠ g2(0)); throws std::logic_error if the solution
/// is not unique.
std::optional<weil::WeilElement<Rational>> glue_axes(const weil::WeilElement<Rational>& g1,
                                                     const weil::WeilElement<Rational>& g2);

/// Runs every check; `dim` maps D → R^dim are glued per coordinate in the
/// randomized pullback check.
MicrolinearityReport microlinearity_checks(std::size_t dim, int trials = 100,
                                           std::uint64_t seed = 20240601);

nlohmann::json to_json(const MicrolinearityReport& report);

}  // namespace nilgeom::sdg

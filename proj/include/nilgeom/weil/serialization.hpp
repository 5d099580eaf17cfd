#pragma once

// JSON form of specs and elements:
//   {"spec": {"kind": "DkOfN", "k": 2, "n": 3, "K": 0},
//    "terms": [{"exp": [1, 0, 0], "coeff": "3/2"}, ...]}
// Terms are sorted lexicographically by exponent. Exact coefficients are
// "p/q" strings; float coefficients are JSON numbers.

#include "json.hpp"

#include "nilgeom/weil/element.hpp"

namespace nilgeom::weil {

std::string kind_name(SpecKind kind);
SpecKind kind_from_name(const std::string& name);

nlohmann::json spec_to_json(const InfinitesimalSpec& spec);
InfinitesimalSpec spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WeilElement<double>& a);
nlohmann::json to_json(const WeilElement<Rational>& a);

/// Throws std::invalid_argument on malformed input or unreduced terms.
WeilElement<double> element_from_json_float(const nlohmann::json& j);
WeilElement<Rational> element_from_json_exact(const nlohmann::json& j);

}  // namespace nilgeom::weil

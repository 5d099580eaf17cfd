#pragma once

// Transcendental functions of float-valued Weil elements, so chart formulas
// written once for double can be evaluated on jets.

#include "nilgeom/weil/element.hpp"

namespace nilgeom::weil {

using Jet = WeilElement<double>;

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
/// Requires a positive augmentation.
Jet sqrt(const Jet& a);
/// Requires a nonzero augmentation (a unit of the algebra).
Jet reciprocal(const Jet& a);

Jet operator/(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, double b);
Jet operator/(double a, const Jet& b);

/// `value` in the ring of `like`: a constant for jets, itself for doubles.
inline double constant_like(double /*like*/, double value) { return value; }
inline Jet constant_like(const Jet& like, double value) { return Jet::constant(like.spec(), value); }

}  // namespace nilgeom::weil

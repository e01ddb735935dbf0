#pragma once

#include <functional>

#include "usl3/foamgeom.hpp"
#include "usl3/ground.hpp"

namespace usl3 {

using TraceSink = std::function<void(const std::string&)>;

// Closed-foam evaluation by the local relation calculus: dot reduction,
// sphere and theta values, bubble collapse and neck-cutting, with a strict
// termination guard. The unique consistent evaluation of the quotient
// category.
GroundElt evaluate_closed(const AbstractFoam& f, TraceSink trace = nullptr);
GroundElt evaluate_closed(const FoamMovie& m, TraceSink trace = nullptr);
GroundElt evaluate_closed(const FoamExpression& e, TraceSink trace = nullptr);

// Independent oracle: state sum over admissible 3-colorings of the facets,
// with weights fixed by the sphere and theta values. Computed in the ring
// of symmetric polynomials of the three roots of X^3 - aX^2 - bX - c.
GroundElt evaluate_statesum(const AbstractFoam& f);
GroundElt evaluate_statesum(const FoamMovie& m);
GroundElt evaluate_statesum(const FoamExpression& e);

// dotted sphere and theta values (exposed for tests and deloop duals)
GroundElt sphere_value(int dots);
GroundElt theta_value(int d1, int d2, int d3); // dots in cyclic germ order

// 3x3 pairing P[i][j] = sphere_value(i+j) and its inverse over Z[a,b,c]
std::array<std::array<GroundElt, 3>, 3> circle_pairing();
std::array<std::array<GroundElt, 3>, 3> circle_pairing_inverse();

} // namespace usl3

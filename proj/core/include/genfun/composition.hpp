#pragma once

// Composition of generating functions through the symplectic area of the
// triangle spanned by the three side midpoints.
//
// With P -> R under Phi_{H1} (midpoint x1) and R -> Q under Phi_{H2}
// (midpoint x2), the composite P -> Q has midpoint x and generating function
//
//   H(x) = stat_{x1, x2} [ H1(x1) + H2(x2) + kAreaOrientation * area(P, Q, R) ].

#include <span>

#include "genfun/midpoint_map.hpp"

namespace genfun {

/// Orientation constant multiplying triangle_area(P, Q, R) in the composition
/// functional and in the Moyal kernel. With area = 1/2 omega(Q - P, R - P) the
/// value -1 makes the functional measure the triangle traversed P -> R -> Q,
/// the order in which the composite map visits the vertices.
inline constexpr double kAreaOrientation = -1.0;

struct CompositionProblem {
  SymplecticStructure space;
  HamiltonianField h1;  // applied first
  HamiltonianField h2;  // applied second
  SolverConfig cfg;

  CompositionProblem(SymplecticStructure s, const HamiltonianSpec& first, const HamiltonianSpec& second,
                     SolverConfig c = {});
  CompositionProblem(SymplecticStructure s, HamiltonianField first, HamiltonianField second, SolverConfig c = {});
};

/// H1(x1) + H2(x2) + kAreaOrientation * triangle_area(vertices_from_midpoints(m)).
double triangle_functional(const CompositionProblem& prob, const MidpointTriple& m);

struct ComposedValue {
  double value = 0.0;
  PhasePoint x1;
  PhasePoint x2;
  /// dH/dx at the critical point (envelope theorem: the partial of the functional in x).
  Vector gradient;
  /// d^2H/dx^2 by implicit differentiation of the stationarity system; empty
  /// if either Hamiltonian lacks an analytic Hessian.
  Matrix hessian;
};

/// Critical point of the functional in (x1, x2) for fixed x, by Newton from
/// (x, x). With `check_uniqueness` a second solve from the first-order
/// predictor (x - u2(x)/2, x + u1(x)/2) runs and MultipleRootSuspected is
/// thrown if the roots differ by more than 1e-6.
ComposedValue compose_genfun_numeric(const CompositionProblem& prob, const PhasePoint& x,
                                     bool check_uniqueness = false);

struct QuadraticGenfun {
  Matrix s;
  Vector b;
  double c = 0.0;
};

/// Generating function of cayley(S2) * cayley(S1). Throws CayleySingular.
QuadraticGenfun compose_quadratic_closed(const SymplecticStructure& space, const Matrix& s1, const Matrix& s2);

/// The composed generating function as a field, evaluated pointwise through
/// compose_genfun_numeric. Usable as input to MidpointMap.
HamiltonianField composed_field(const CompositionProblem& prob);

/// max over samples of |Phi_H(P) - Phi_{H2}(Phi_{H1}(P))| with H the composed
/// generating function.
double verify_composition(const CompositionProblem& prob, std::span<const PhasePoint> samples);

}  // namespace genfun

#pragma once

// Composition of spherical generating functions: the affine rule with the
// planar triangle replaced by the geodesic triangle whose side midpoints are
// x1, x2, x. Area derivatives are taken by central differences.

#include <span>

#include "genfun/composition.hpp"
#include "genfun/sphere.hpp"

namespace genfun::sphere {

/// Central-difference step for derivatives of the spherical area functional.
inline constexpr double kAreaFdStep = 1e-5;
/// Residual floor of the stationarity solve: FD gradients carry ~1e-11 noise.
inline constexpr double kStationarityTol = 1e-10;
/// Tolerance and Jacobian step for midpoint solves driven by the composed
/// gradient, which inherits the stationarity noise.
inline constexpr double kComposedMapTol = 1e-9;
inline constexpr double kComposedMapFdStep = 1e-4;

struct SphereCompositionProblem {
  SphereField h1;  // applied first
  SphereField h2;  // applied second
  SolverConfig cfg;

  SphereCompositionProblem(const SphereHamiltonian& first, const SphereHamiltonian& second, SolverConfig c = {});
  SphereCompositionProblem(SphereField first, SphereField second, SolverConfig c = {});
};

/// H1(x1) + H2(x2) + kAreaOrientation * spherical_triangle_area(P, Q, R).
double sphere_triangle_functional(const SphereCompositionProblem& prob, const SpherePoint& x1,
                                  const SpherePoint& x2, const SpherePoint& x);

struct SphereComposedValue {
  double value = 0.0;
  SpherePoint x1;
  SpherePoint x2;
  /// Surface gradient of the composed generating function at x.
  Vec3 gradient;
};

/// Critical point over (x1, x2), each in the gnomonic chart at x, Newton from (x, x).
SphereComposedValue sphere_compose_genfun(const SphereCompositionProblem& prob, const SpherePoint& x);

SphereField sphere_composed_field(const SphereCompositionProblem& prob);

/// max over samples of |Phi_H(P) - Phi_{H2}(Phi_{H1}(P))|.
double sphere_verify_composition(const SphereCompositionProblem& prob, std::span<const SpherePoint> samples);

}  // namespace genfun::sphere

#pragma once

// The midpoint generating-function map: for each x the displacement u_x is
// laid down with x at its middle, and the map sends its tail P = x - u_x/2
// to its head Q = x + u_x/2. For quadratic H this is the Cayley transform of
// the Hamiltonian matrix.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "genfun/hamiltonian.hpp"

namespace genfun {

struct MidpointStep {
  PhasePoint point;     // Q for forward, P for inverse
  PhasePoint midpoint;  // x
};

class MidpointMap {
 public:
  MidpointMap(SymplecticStructure space, const HamiltonianSpec& h, SolverConfig cfg = {});
  MidpointMap(SymplecticStructure space, HamiltonianField h, SolverConfig cfg = {});

  const SymplecticStructure& space() const noexcept { return space_; }
  const HamiltonianField& field() const noexcept { return field_; }
  const SolverConfig& config() const noexcept { return cfg_; }

  /// Q = Phi_H(P). Newton starts from x = P. Throws NoConvergence or
  /// SingularJacobian (I - Du/2 degenerate, where the Cayley form breaks down).
  MidpointStep forward(const PhasePoint& p) const;

  /// P = Phi_H^{-1}(Q).
  MidpointStep inverse(const PhasePoint& q) const;

 private:
  MidpointStep solve(const PhasePoint& endpoint, double sign) const;

  SymplecticStructure space_;
  HamiltonianField field_;
  SolverConfig cfg_;
};

inline MidpointStep phi_forward(const MidpointMap& map, const PhasePoint& p) { return map.forward(p); }
inline MidpointStep phi_inverse(const MidpointMap& map, const PhasePoint& q) { return map.inverse(q); }

/// (I + L/2)(I - L/2)^{-1} for the Hamiltonian matrix L of 1/2 x^T S x.
/// Throws CayleySingular when I - L/2 has condition number above 1e12.
Matrix cayley_map_quadratic(const SymplecticStructure& space, const Matrix& s);

/// Inverse Cayley: the symmetric S whose Cayley map is `phi`.
/// Throws CayleySingular when phi + I is singular (eigenvalue -1).
Matrix genfun_of_linear_map(const SymplecticStructure& space, const Matrix& phi);

/// Central-difference Jacobian of the forward map at p.
Matrix forward_jacobian(const MidpointMap& map, const PhasePoint& p, double fd_step = 1e-5);

/// max |DPhi^T Omega DPhi - Omega|.
double symplecticity_defect(const MidpointMap& map, const PhasePoint& p, double fd_step = 1e-5);

struct OrderFit {
  std::vector<double> eps;
  std::vector<double> defects;
  double slope = 0.0;
};

using MapFamily = std::function<MidpointMap(double eps)>;
/// Reference motion used to measure the defect: (eps, P) -> point.
using ReferenceFlow = std::function<PhasePoint(double eps, const PhasePoint& p)>;

/// Log-log slope of |Phi_{eps H}(P) - reference(eps, P)| over `eps`.
/// Without a reference the first-order motion P + eps * X_H(P) is used, with
/// X_H read off the family at eps = 1. Throws DegenerateFit when every defect
/// vanishes (for example H = 0).
OrderFit infinitesimal_order(const MapFamily& family, const PhasePoint& p, std::span<const double> eps,
                             const ReferenceFlow& reference = {});

/// Ten logarithmically spaced values across [1e-3, 1e-2].
std::vector<double> default_order_eps();

/// Right-hand side x' = X_H(x) of Hamilton's equations.
VectorMap hamiltonian_vector_field(const SymplecticStructure& space, const HamiltonianField& h);

}  // namespace genfun

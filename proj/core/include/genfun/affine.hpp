#pragma once

// Geometry of a symplectic vector space with a constant form: the pairing,
// triangles with their symplectic area, midpoint reconstruction, and the
// identification of pairs of points with covectors.

#include "genfun/numerics.hpp"

namespace genfun {

/// Point of the 2n-dimensional phase space, coordinates ordered (q_1..q_n, p_1..p_n).
using PhasePoint = Vector;

class SymplecticStructure {
 public:
  /// Standard block form: omega(e_i, e_{n+i}) = 1.
  static SymplecticStructure standard(int n);

  /// Arbitrary constant form. Throws InvalidArgument unless `form` is square,
  /// even-dimensional, antisymmetric and invertible.
  explicit SymplecticStructure(Matrix form);

  int half_dim() const noexcept { return static_cast<int>(form_.rows() / 2); }
  int dim() const noexcept { return static_cast<int>(form_.rows()); }
  const Matrix& form() const noexcept { return form_; }

  /// omega(u, v) = u^T * Omega * v.
  double omega(const Vector& u, const Vector& v) const;

  /// Components of the covector u -| omega, i.e. Omega^T u.
  Vector flat(const Vector& u) const;

  /// Inverse of flat: the vector u with Omega^T u = alpha.
  Vector sharp(const Vector& alpha) const;

  /// Throws DimensionMismatch unless v has dimension 2n.
  void check_dim(const Vector& v, const char* what) const;

 private:
  Matrix form_;
  Matrix sharp_;  // (Omega^T)^{-1}
};

struct Triangle {
  PhasePoint p, q, r;
};

/// Side midpoints: x1 on PR, x2 on RQ, x on PQ.
struct MidpointTriple {
  PhasePoint x1, x2, x;
};

/// Signed area 1/2 * omega(Q - P, R - P).
double triangle_area(const SymplecticStructure& space, const Triangle& t);

/// Unique triangle whose sides PR, RQ, PQ have midpoints x1, x2, x.
Triangle vertices_from_midpoints(const MidpointTriple& m);

MidpointTriple midpoints_of(const Triangle& t);

/// A point of T*A: base point plus covector components.
struct CotangentPoint {
  PhasePoint base;
  Vector covector;
};

/// (P, Q) -> ((P + Q) / 2, (Q - P) -| omega).
CotangentPoint pair_to_cotangent(const SymplecticStructure& space, const PhasePoint& p,
                                 const PhasePoint& q);

struct PointPair {
  PhasePoint first, second;
};

PointPair cotangent_to_pair(const SymplecticStructure& space, const CotangentPoint& c);

/// Matrix of the Hamiltonian vector field of 1/2 x^T S x: omega(L x, v) = x^T S v.
Matrix hamiltonian_matrix(const SymplecticStructure& space, const Matrix& s);

}  // namespace genfun

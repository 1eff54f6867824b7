#include "genfun/affine.hpp"

#include <string>

namespace genfun {

SymplecticStructure SymplecticStructure::standard(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "half-dimension must be >= 1");
  Matrix form = Matrix::Zero(2 * n, 2 * n);
  form.topRightCorner(n, n) = Matrix::Identity(n, n);
  form.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return SymplecticStructure(std::move(form));
}

SymplecticStructure::SymplecticStructure(Matrix form) : form_(std::move(form)) {
  if (form_.rows() != form_.cols() || form_.rows() == 0 || form_.rows() % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "symplectic form must be square of even size");
  if (max_abs(form_ + form_.transpose()) > 1e-14 * (1.0 + max_abs(form_)))
    throw Error(ErrorCode::InvalidArgument, "symplectic form must be antisymmetric");
  const Eigen::FullPivLU<Matrix> lu(form_.transpose());
  if (!lu.isInvertible()) throw Error(ErrorCode::InvalidArgument, "symplectic form must be invertible");
  sharp_ = lu.inverse();
}

void SymplecticStructure::check_dim(const Vector& v, const char* what) const {
  if (v.size() != form_.rows())
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has dimension " +
                                                  std::to_string(v.size()) + ", expected " +
                                                  std::to_string(form_.rows()));
}

double SymplecticStructure::omega(const Vector& u, const Vector& v) const {
  check_dim(u, "u");
  check_dim(v, "v");
  return u.dot(form_ * v);
}

Vector SymplecticStructure::flat(const Vector& u) const {
  check_dim(u, "vector");
  return form_.transpose() * u;
}

Vector SymplecticStructure::sharp(const Vector& alpha) const {
  check_dim(alpha, "covector");
  return sharp_ * alpha;
}

double triangle_area(const SymplecticStructure& space, const Triangle& t) {
  return 0.5 * space.omega(t.q - t.p, t.r - t.p);
}

Triangle vertices_from_midpoints(const MidpointTriple& m) {
  if (m.x1.size() != m.x.size() || m.x2.size() != m.x.size())
    throw Error(ErrorCode::DimensionMismatch, "midpoints must share a dimension");
  return Triangle{m.x1 - m.x2 + m.x, -m.x1 + m.x2 + m.x, m.x1 + m.x2 - m.x};
}

MidpointTriple midpoints_of(const Triangle& t) {
  return MidpointTriple{0.5 * (t.p + t.r), 0.5 * (t.r + t.q), 0.5 * (t.p + t.q)};
}

CotangentPoint pair_to_cotangent(const SymplecticStructure& space, const PhasePoint& p,
                                 const PhasePoint& q) {
  space.check_dim(p, "P");
  space.check_dim(q, "Q");
  return CotangentPoint{0.5 * (p + q), space.flat(q - p)};
}

PointPair cotangent_to_pair(const SymplecticStructure& space, const CotangentPoint& c) {
  space.check_dim(c.base, "base");
  const Vector half = 0.5 * space.sharp(c.covector);
  return PointPair{c.base - half, c.base + half};
}

Matrix hamiltonian_matrix(const SymplecticStructure& space, const Matrix& s) {
  if (s.rows() != space.dim() || s.cols() != space.dim())
    throw Error(ErrorCode::DimensionMismatch, "quadratic form has the wrong size");
  // Omega^T L = S.
  Matrix l(space.dim(), space.dim());
  for (int j = 0; j < space.dim(); ++j) l.col(j) = space.sharp(s.col(j));
  return l;
}

}  // namespace genfun

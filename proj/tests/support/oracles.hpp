#pragma once

// Reference computations written directly in coordinates, without going
// through the library's structures. Used as ground truth by the unit tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Hamilton's equations: (dq, dp) = (dH/dp, -dH/dq) for x = (q, p).
inline Vec hamilton_velocity(const Vec& grad) {
  const auto n = grad.size() / 2;
  Vec v(grad.size());
  v.head(n) = grad.tail(n);
  v.tail(n) = -grad.head(n);
  return v;
}

// Implicit midpoint step Q = P + v((P + Q) / 2) by plain fixed-point iteration.
inline Vec midpoint_step(const std::function<Vec(const Vec&)>& grad, const Vec& p, int iterations = 200) {
  Vec x = p;
  for (int k = 0; k < iterations; ++k) x = p + 0.5 * hamilton_velocity(grad(x));
  return 2.0 * x - p;
}

// 1/2 sum_i (a_q b_p - a_p b_q) with a = Q - P, b = R - P.
inline double shoelace_area(const Vec& p, const Vec& q, const Vec& r) {
  const Vec a = q - p;
  const Vec b = r - p;
  const auto n = a.size() / 2;
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += a[i] * b[n + i] - a[n + i] * b[i];
  return 0.5 * s;
}

// Linear part of the vector field of 1/2 x^T S x for one degree of freedom.
inline Eigen::Matrix2d field_matrix(const Eigen::Matrix2d& s) {
  Eigen::Matrix2d l;
  l << s(0, 1), s(1, 1), -s(0, 0), -s(0, 1);
  return l;
}

inline Eigen::Matrix2d inverse_2x2(const Eigen::Matrix2d& m) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Eigen::Matrix2d inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

inline Eigen::Matrix2d cayley(const Eigen::Matrix2d& s) {
  const Eigen::Matrix2d half = 0.5 * field_matrix(s);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  return inverse_2x2(id - half) * (id + half);
}

inline Eigen::Matrix2d inverse_cayley(const Eigen::Matrix2d& phi) {
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d l = 2.0 * (phi - id) * inverse_2x2(phi + id);
  Eigen::Matrix2d s;
  s << -l(1, 0), l(0, 0), l(0, 0), l(0, 1);
  return s;
}

// Generating function of "first S1, then S2".
inline Eigen::Matrix2d composed_quadratic(const Eigen::Matrix2d& s1, const Eigen::Matrix2d& s2) {
  return inverse_cayley(cayley(s2) * cayley(s1));
}

// Rodrigues rotation about the unit axis `k` by `angle`.
inline Mat3 rotation(const Vec3& k, double angle) {
  Mat3 cross;
  cross << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return Mat3::Identity() + std::sin(angle) * cross + (1.0 - std::cos(angle)) * cross * cross;
}

// The midpoint map of H = c . p on the unit sphere turns each circle around c
// rigidly. For a point at angle beta from c the turning angle theta solves
// 4 tan^2(theta/2) (cos^2 beta + sin^2 beta cos^2(theta/2)) = |c|^2; found by bisection.
inline double linear_sphere_angle(const Vec3& c, const Vec3& p) {
  const double cb = c.normalized().dot(p);
  const double cb2 = cb * cb;
  const double sb2 = 1.0 - cb2;
  const auto f = [&](double t) { return 4.0 * t * t * (cb2 + sb2 / (1.0 + t * t)) - c.squaredNorm(); };
  double lo = 0.0, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 2.0 * std::atan(0.5 * (lo + hi));
}

// Girard: area of a small spherical triangle is its angle excess; sign from det[P, Q, R].
inline double girard_area(const Vec3& p, const Vec3& q, const Vec3& r) {
  const auto angle = [](const Vec3& at, const Vec3& a, const Vec3& b) {
    const Vec3 ta = a - at * at.dot(a);
    const Vec3 tb = b - at * at.dot(b);
    return std::acos(std::clamp(ta.normalized().dot(tb.normalized()), -1.0, 1.0));
  };
  const double excess = angle(p, q, r) + angle(q, r, p) + angle(r, p, q) - std::numbers::pi;
  Mat3 m;
  m << p, q, r;
  return m.determinant() >= 0 ? excess : -excess;
}

}  // namespace oracle

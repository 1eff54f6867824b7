#pragma once

// The same construction on the unit sphere with its area form
// omega_x(a, b) = x . (a x b) (total area 4 pi). A pair of non-antipodal
// points (P, Q) corresponds to the tangent vector u at the midpoint x of the
// shorter arc PQ obtained by projecting P and Q along the axis through x;
// |u| = 2 sin(d(P, Q) / 2) < 2.

#include <array>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "genfun/numerics.hpp"

namespace genfun::sphere {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Unit vector; the constructor normalizes and rejects zero or non-finite input.
class SpherePoint {
 public:
  explicit SpherePoint(const Vec3& v);
  SpherePoint(double x, double y, double z) : SpherePoint(Vec3(x, y, z)) {}

  const Vec3& vec() const noexcept { return v_; }
  double dot(const SpherePoint& o) const noexcept { return v_.dot(o.v_); }

 private:
  Vec3 v_;
};

/// Tangent vector anchored at a sphere point. Throws NotTangent if
/// |u . base| exceeds 1e-12 (1 + |u|).
struct TangentAt {
  SpherePoint base;
  Vec3 u;

  TangentAt(SpherePoint b, Vec3 v);
};

struct SpherePair {
  SpherePoint first;
  SpherePoint second;
};

struct SphereTriangle {
  SpherePoint p, q, r;
};

/// Orthonormal (e1, e2) spanning T_x with e1 x e2 = x.
std::array<Vec3, 2> tangent_frame(const SpherePoint& x);

/// Great-circle distance in [0, pi].
double geodesic_distance(const SpherePoint& p, const SpherePoint& q);

/// Midpoint of the shorter arc. Throws AntipodalPair when |P + Q| < 1e-9.
SpherePoint geodesic_midpoint(const SpherePoint& p, const SpherePoint& q);

/// Rotation by pi about x: 2 (p . x) x - p.
SpherePoint point_symmetry(const SpherePoint& x, const SpherePoint& p);
Mat3 point_symmetry_matrix(const SpherePoint& x);

/// Throws AntipodalPair.
TangentAt pair_to_tangent(const SpherePoint& p, const SpherePoint& q);

/// P, Q = -/+ u/2 + sqrt(1 - |u|^2/4) x. Throws TangentTooLong when |u| >= 2.
SpherePair tangent_to_pair(const TangentAt& t);

/// Signed area of the geodesic triangle with shorter-arc sides: magnitude is
/// the spherical excess, sign is that of det[P, Q, R]. Throws AntipodalPair.
double spherical_triangle_area(const SpherePoint& p, const SpherePoint& q, const SpherePoint& r);

/// Geodesic triangle whose sides PR, RQ, PQ have midpoints x1, x2, x. P is the
/// fixed point of sigma_x sigma_x2 sigma_x1 for which all three reconstructed
/// midpoints lie on shorter arcs. Throws DegenerateConfiguration.
SphereTriangle spherical_vertices_from_midpoints(const SpherePoint& x1, const SpherePoint& x2,
                                                 const SpherePoint& x);

struct LinearSphereHamiltonian {
  Vec3 c;
};

struct AmbientMonomial {
  std::array<int, 3> exponent{};
  double coef = 0.0;
};

/// Polynomial in the ambient coordinates (p_x, p_y, p_z), restricted to the sphere.
struct AmbientPolynomialHamiltonian {
  std::vector<AmbientMonomial> terms;
};

class SphereHamiltonian {
 public:
  using Variant = std::variant<LinearSphereHamiltonian, AmbientPolynomialHamiltonian>;

  static SphereHamiltonian linear(const Vec3& c);
  static SphereHamiltonian ambient_polynomial(std::vector<AmbientMonomial> terms);

  SphereHamiltonian scaled(double factor) const;

  const Variant& variant() const noexcept { return variant_; }
  double scale() const noexcept { return scale_; }

  double value(const Vec3& p) const;
  /// Gradient of the ambient extension; only its tangential part matters.
  Vec3 ambient_gradient(const Vec3& p) const;

 private:
  SphereHamiltonian(Variant v, double scale) : variant_(std::move(v)), scale_(scale) {}

  Variant variant_;
  double scale_ = 1.0;
};

/// Type-erased function on the sphere. `gradient` may return any ambient
/// vector whose tangential part is the surface gradient.
struct SphereField {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
};

SphereField field_of(const SphereHamiltonian& h);

/// p -> H(O^T p).
SphereField rotated(const SphereField& h, const Mat3& rotation);

/// Tangential part of the gradient at x.
Vec3 surface_gradient(const SphereField& h, const SpherePoint& x);

/// u with omega_x(u, v) = dH(v) for tangent v: u = grad_S H x x.
TangentAt sphere_hamiltonian_vector(const SphereField& h, const SpherePoint& x);
TangentAt sphere_hamiltonian_vector(const SphereHamiltonian& h, const SpherePoint& x);

struct SphereStep {
  SpherePoint point;     // Q for forward, P for inverse
  SpherePoint midpoint;  // x
};

/// Q = Phi_H(P). The midpoint is found by damped Newton in the gnomonic chart
/// centred at P, which covers every admissible midpoint. Throws NoConvergence,
/// SingularJacobian or TangentTooLong.
SphereStep sphere_phi_forward(const SphereField& h, const SpherePoint& p, const SolverConfig& cfg = {});
SphereStep sphere_phi_forward(const SphereHamiltonian& h, const SpherePoint& p, const SolverConfig& cfg = {});

/// P = Phi_H^{-1}(Q).
SphereStep sphere_phi_inverse(const SphereField& h, const SpherePoint& q, const SolverConfig& cfg = {});

/// Determinant of DPhi_H between the oriented orthonormal frames at P and Q,
/// by central differences with step `fd_step`. Equals 1 for an area-preserving map.
double area_jacobian_determinant(const SphereField& h, const SpherePoint& p, const SolverConfig& cfg = {},
                                 double fd_step = 1e-5);

/// Right-hand side x' = grad H(x) x x of the Hamiltonian flow.
std::function<Vec3(const Vec3&)> sphere_vector_field(const SphereField& h);

/// Flow of H for time t by RK4 with `steps` substeps, renormalized at the end.
SpherePoint sphere_reference_flow(const SphereField& h, const SpherePoint& p, double t, int steps = 2000);

/// Discrepancy between the pullback of the canonical 2-form on T*S^2 through
/// (P, Q) -> (x, u -| omega) and the form omega_Q - omega_P, over the
/// coordinate pairs of a gnomonic chart at (P, Q). Throws AntipodalPair.
double pullback_defect(const SpherePoint& p, const SpherePoint& q, double fd_step = 1e-4);

// JSON: {"type":"linear","c":[0,0,1]} | {"type":"ambient_poly","terms":[{"exp":[1,1,0],"coef":1.0}]},
// with an optional "scale".
void to_json(nlohmann::json& j, const SphereHamiltonian& h);
SphereHamiltonian sphere_hamiltonian_from_json(const nlohmann::json& j);

}  // namespace genfun::sphere

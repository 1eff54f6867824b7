#include "genfun/sphere.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace genfun::sphere {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kAntipodalThreshold = 1e-9;

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void require_non_antipodal(const SpherePoint& p, const SpherePoint& q) {
  if ((p.vec() + q.vec()).norm() < kAntipodalThreshold)
    throw Error(ErrorCode::AntipodalPair, "points are antipodal");
}

Vec3 to_vec3(const Vector& v) { return Vec3(v[0], v[1], v[2]); }

// Gnomonic chart centred at `center`: xi -> normalize(center + e1 xi_1 + e2 xi_2).
struct GnomonicChart {
  Vec3 center;
  std::array<Vec3, 2> frame;

  explicit GnomonicChart(const SpherePoint& c) : center(c.vec()), frame(tangent_frame(c)) {}

  Vec3 point(const Vector& xi) const { return (center + frame[0] * xi[0] + frame[1] * xi[1]).normalized(); }

  // Derivative of point() along coordinate k at xi.
  Vec3 tangent(const Vector& xi, int k) const {
    const Vec3 w = center + frame[0] * xi[0] + frame[1] * xi[1];
    const double len = w.norm();
    const Vec3 n = w / len;
    const Vec3& e = frame[static_cast<std::size_t>(k)];
    return (e - n * n.dot(e)) / len;
  }

  Vector coords(const Vec3& v) const {
    Vector xi(2);
    xi << frame[0].dot(v), frame[1].dot(v);
    return xi;
  }
};

}  // namespace

SpherePoint::SpherePoint(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || !(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "sphere point needs a nonzero finite vector");
  v_ = v / n;
}

TangentAt::TangentAt(SpherePoint b, Vec3 v) : base(std::move(b)), u(std::move(v)) {
  if (!u.allFinite()) throw Error(ErrorCode::NonFiniteValue, "tangent vector is not finite");
  if (std::abs(u.dot(base.vec())) > 1e-12 * (1.0 + u.norm()))
    throw Error(ErrorCode::NotTangent, "vector is not tangent at its base point");
}

std::array<Vec3, 2> tangent_frame(const SpherePoint& x) {
  const Vec3& n = x.vec();
  // Seed with the coordinate axis least aligned with n.
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  const Vec3 seed = Vec3::Unit(axis);
  const Vec3 e1 = (seed - n * n.dot(seed)).normalized();
  const Vec3 e2 = n.cross(e1);
  return {e1, e2};
}

double geodesic_distance(const SpherePoint& p, const SpherePoint& q) {
  return std::atan2(p.vec().cross(q.vec()).norm(), p.dot(q));
}

SpherePoint geodesic_midpoint(const SpherePoint& p, const SpherePoint& q) {
  require_non_antipodal(p, q);
  return SpherePoint(p.vec() + q.vec());
}

SpherePoint point_symmetry(const SpherePoint& x, const SpherePoint& p) {
  return SpherePoint(2.0 * p.dot(x) * x.vec() - p.vec());
}

Mat3 point_symmetry_matrix(const SpherePoint& x) { return 2.0 * x.vec() * x.vec().transpose() - Mat3::Identity(); }

TangentAt pair_to_tangent(const SpherePoint& p, const SpherePoint& q) {
  const SpherePoint x = geodesic_midpoint(p, q);
  const auto proj = [&](const Vec3& v) -> Vec3 { return v - x.vec() * x.vec().dot(v); };
  Vec3 u = proj(q.vec()) - proj(p.vec());
  u -= x.vec() * x.vec().dot(u);
  return TangentAt(x, u);
}

SpherePair tangent_to_pair(const TangentAt& t) {
  const double len2 = t.u.squaredNorm();
  if (!(len2 < 4.0)) throw Error(ErrorCode::TangentTooLong, "tangent vector has length >= 2");
  const Vec3 axial = std::sqrt(1.0 - 0.25 * len2) * t.base.vec();
  return SpherePair{SpherePoint(axial - 0.5 * t.u), SpherePoint(axial + 0.5 * t.u)};
}

double spherical_triangle_area(const SpherePoint& p, const SpherePoint& q, const SpherePoint& r) {
  require_non_antipodal(p, q);
  require_non_antipodal(q, r);
  require_non_antipodal(r, p);
  // tan(E/2) = det[P, Q, R] / (1 + P.Q + Q.R + R.P) gives the signed excess directly.
  const double det = p.vec().dot(q.vec().cross(r.vec()));
  const double denom = 1.0 + p.dot(q) + q.dot(r) + r.dot(p);
  return 2.0 * std::atan2(det, denom);
}

SphereTriangle spherical_vertices_from_midpoints(const SpherePoint& x1, const SpherePoint& x2,
                                                 const SpherePoint& x) {
  const Mat3 m = point_symmetry_matrix(x) * point_symmetry_matrix(x2) * point_symmetry_matrix(x1);
  // For a rotation by theta about a, M + M^T - (tr M - 1) I = 2 (1 - cos theta) a a^T.
  const Mat3 b = m + m.transpose() - (m.trace() - 1.0) * Mat3::Identity();
  Eigen::Index col = 0;
  b.colwise().norm().maxCoeff(&col);
  if (!(b.col(col).norm() > 1e-10))
    throw Error(ErrorCode::DegenerateConfiguration, "composite symmetry is the identity");
  const Vec3 axis = b.col(col).normalized();

  for (double sign : {1.0, -1.0}) {
    const SpherePoint p(sign * axis);
    const SpherePoint r = point_symmetry(x1, p);
    const SpherePoint q = point_symmetry(x2, r);
    // sigma_y(a) has y as the shorter-arc midpoint of (a, sigma_y(a)) iff a . y > 0.
    if (p.dot(x1) > 0.0 && r.dot(x2) > 0.0 && q.dot(x) > 0.0) return SphereTriangle{p, q, r};
  }
  throw Error(ErrorCode::DegenerateConfiguration, "no fixed point reproduces the midpoints along shorter arcs");
}

SphereHamiltonian SphereHamiltonian::linear(const Vec3& c) {
  if (!c.allFinite()) throw Error(ErrorCode::NonFiniteValue, "linear Hamiltonian needs a finite vector");
  return SphereHamiltonian(LinearSphereHamiltonian{c}, 1.0);
}

SphereHamiltonian SphereHamiltonian::ambient_polynomial(std::vector<AmbientMonomial> terms) {
  for (const auto& t : terms) {
    for (int e : t.exponent) {
      if (e < 0) throw Error(ErrorCode::InvalidArgument, "ambient polynomial exponents must be nonnegative");
    }
  }
  return SphereHamiltonian(AmbientPolynomialHamiltonian{std::move(terms)}, 1.0);
}

SphereHamiltonian SphereHamiltonian::scaled(double factor) const {
  SphereHamiltonian copy = *this;
  copy.scale_ *= factor;
  return copy;
}

double SphereHamiltonian::value(const Vec3& p) const {
  const double v = std::visit(overloaded{
                                  [&](const LinearSphereHamiltonian& h) { return h.c.dot(p); },
                                  [&](const AmbientPolynomialHamiltonian& h) {
                                    double sum = 0.0;
                                    for (const auto& m : h.terms)
                                      sum += m.coef * ipow(p[0], m.exponent[0]) * ipow(p[1], m.exponent[1]) *
                                             ipow(p[2], m.exponent[2]);
                                    return sum;
                                  },
                              },
                              variant_);
  return scale_ * v;
}

Vec3 SphereHamiltonian::ambient_gradient(const Vec3& p) const {
  const Vec3 g = std::visit(overloaded{
                                [&](const LinearSphereHamiltonian& h) -> Vec3 { return h.c; },
                                [&](const AmbientPolynomialHamiltonian& h) -> Vec3 {
                                  Vec3 out = Vec3::Zero();
                                  for (const auto& m : h.terms) {
                                    for (int i = 0; i < 3; ++i) {
                                      if (m.exponent[static_cast<std::size_t>(i)] == 0) continue;
                                      double term = m.coef * m.exponent[static_cast<std::size_t>(i)];
                                      for (int k = 0; k < 3; ++k)
                                        term *= ipow(p[k], m.exponent[static_cast<std::size_t>(k)] - (k == i ? 1 : 0));
                                      out[i] += term;
                                    }
                                  }
                                  return out;
                                },
                            },
                            variant_);
  return scale_ * g;
}

SphereField field_of(const SphereHamiltonian& h) {
  return SphereField{[h](const Vec3& p) { return h.value(p); }, [h](const Vec3& p) { return h.ambient_gradient(p); }};
}

SphereField rotated(const SphereField& h, const Mat3& rotation) {
  SphereField out;
  if (h.value) out.value = [f = h.value, rotation](const Vec3& p) { return f(rotation.transpose() * p); };
  out.gradient = [g = h.gradient, rotation](const Vec3& p) -> Vec3 { return rotation * g(rotation.transpose() * p); };
  return out;
}

Vec3 surface_gradient(const SphereField& h, const SpherePoint& x) {
  const Vec3 g = h.gradient(x.vec());
  return g - x.vec() * x.vec().dot(g);
}

TangentAt sphere_hamiltonian_vector(const SphereField& h, const SpherePoint& x) {
  Vec3 u = surface_gradient(h, x).cross(x.vec());
  u -= x.vec() * x.vec().dot(u);
  return TangentAt(x, u);
}

TangentAt sphere_hamiltonian_vector(const SphereHamiltonian& h, const SpherePoint& x) {
  return sphere_hamiltonian_vector(field_of(h), x);
}

namespace {

// Solves for the midpoint x of the pair whose `which` end equals `endpoint`
// (sign -1: tail P, sign +1: head Q).
SphereStep solve_midpoint(const SphereField& h, const SpherePoint& endpoint, double sign, const SolverConfig& cfg) {
  const GnomonicChart chart(endpoint);
  const auto end_of = [&](const Vector& xi) -> std::optional<Vec3> {
    const SpherePoint x(chart.point(xi));
    const Vec3 u = sphere_hamiltonian_vector(h, x).u;
    const double len2 = u.squaredNorm();
    if (!(len2 < 4.0)) return std::nullopt;
    return Vec3(std::sqrt(1.0 - 0.25 * len2) * x.vec() + 0.5 * sign * u);
  };
  const auto residual = [&](const Vector& xi) -> Vector {
    const auto e = end_of(xi);
    if (!e) return Vector::Constant(2, std::numeric_limits<double>::quiet_NaN());
    return chart.coords(*e - endpoint.vec());
  };
  const SolveReport report = solve_newton(residual, Vector::Zero(2), cfg);
  if (!report.converged) {
    if (report.status == SolveStatus::NonFiniteValue)
      throw Error(ErrorCode::TangentTooLong, "Hamiltonian displacement leaves the ball |u| < 2");
    throw Error(to_error_code(report.status),
                "spherical midpoint equation did not converge (residual " + std::to_string(report.residual_norm) + ")");
  }
  const SpherePoint x(chart.point(report.root));
  const TangentAt t = sphere_hamiltonian_vector(h, x);
  const SpherePair pair = tangent_to_pair(t);
  return SphereStep{sign < 0 ? pair.second : pair.first, x};
}

}  // namespace

SphereStep sphere_phi_forward(const SphereField& h, const SpherePoint& p, const SolverConfig& cfg) {
  return solve_midpoint(h, p, -1.0, cfg);
}

SphereStep sphere_phi_forward(const SphereHamiltonian& h, const SpherePoint& p, const SolverConfig& cfg) {
  return sphere_phi_forward(field_of(h), p, cfg);
}

SphereStep sphere_phi_inverse(const SphereField& h, const SpherePoint& q, const SolverConfig& cfg) {
  return solve_midpoint(h, q, +1.0, cfg);
}

double area_jacobian_determinant(const SphereField& h, const SpherePoint& p, const SolverConfig& cfg,
                                 double fd_step) {
  const auto frame_p = tangent_frame(p);
  const SpherePoint q = sphere_phi_forward(h, p, cfg).point;
  const auto frame_q = tangent_frame(q);
  Eigen::Matrix2d jac;
  for (int j = 0; j < 2; ++j) {
    const Vec3& e = frame_p[static_cast<std::size_t>(j)];
    const Vec3 plus = sphere_phi_forward(h, SpherePoint(p.vec() + fd_step * e), cfg).point.vec();
    const Vec3 minus = sphere_phi_forward(h, SpherePoint(p.vec() - fd_step * e), cfg).point.vec();
    const Vec3 d = (plus - minus) / (2.0 * fd_step);
    jac(0, j) = frame_q[0].dot(d);
    jac(1, j) = frame_q[1].dot(d);
  }
  return jac.determinant();
}

std::function<Vec3(const Vec3&)> sphere_vector_field(const SphereField& h) {
  return [g = h.gradient](const Vec3& x) -> Vec3 { return g(x).cross(x); };
}

SpherePoint sphere_reference_flow(const SphereField& h, const SpherePoint& p, double t, int steps) {
  const auto rhs = sphere_vector_field(h);
  const Vector end = integrate_rk4([&](const Vector& y) -> Vector { return rhs(to_vec3(y)); }, Vector(p.vec()), t, steps);
  return SpherePoint(to_vec3(end));
}

double pullback_defect(const SpherePoint& p, const SpherePoint& q, double fd_step) {
  require_non_antipodal(p, q);
  const GnomonicChart chart_p(p);
  const GnomonicChart chart_q(q);

  // Chart coordinates c = (xi_P, xi_Q) in R^4.
  const auto points = [&](const Vector& c) {
    return std::pair{chart_p.point(c.head(2)), chart_q.point(c.tail(2))};
  };
  const auto tangents = [&](const Vector& c, int k) {
    // (dP/dc_k, dQ/dc_k)
    if (k < 2) return std::pair{chart_p.tangent(c.head(2), k), Vec3(Vec3::Zero())};
    return std::pair{Vec3(Vec3::Zero()), chart_q.tangent(c.tail(2), k - 2)};
  };
  // Canonical 1-form on T*S^2 evaluated on d/dc_k: alpha(dx) with alpha = u -| omega_x.
  const auto liouville = [&](const Vector& c, int k) {
    const auto [pp, qq] = points(c);
    const TangentAt t = pair_to_tangent(SpherePoint(pp), SpherePoint(qq));
    const Vec3 s = pp + qq;
    const double len = s.norm();
    const Vec3 x = s / len;
    const auto [dp, dq] = tangents(c, k);
    const Vec3 ds = dp + dq;
    const Vec3 dx = (ds - x * x.dot(ds)) / len;
    return x.dot(t.u.cross(dx));
  };

  const Vector origin = Vector::Zero(4);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      Vector e_i = Vector::Zero(4);
      Vector e_j = Vector::Zero(4);
      e_i[i] = fd_step;
      e_j[j] = fd_step;
      const double di_lj = (liouville(origin + e_i, j) - liouville(origin - e_i, j)) / (2.0 * fd_step);
      const double dj_li = (liouville(origin + e_j, i) - liouville(origin - e_j, i)) / (2.0 * fd_step);
      const double canonical = di_lj - dj_li;

      const auto [pi, qi] = tangents(origin, i);
      const auto [pj, qj] = tangents(origin, j);
      const double product = q.vec().dot(qi.cross(qj)) - p.vec().dot(pi.cross(pj));
      worst = std::max(worst, std::abs(canonical - product));
    }
  }
  return worst;
}

void to_json(nlohmann::json& j, const SphereHamiltonian& h) {
  std::visit(overloaded{
                 [&](const LinearSphereHamiltonian& l) {
                   j = {{"type", "linear"}, {"c", {l.c[0], l.c[1], l.c[2]}}};
                 },
                 [&](const AmbientPolynomialHamiltonian& a) {
                   nlohmann::json terms = nlohmann::json::array();
                   for (const auto& m : a.terms) terms.push_back({{"exp", m.exponent}, {"coef", m.coef}});
                   j = {{"type", "ambient_poly"}, {"terms", std::move(terms)}};
                 },
             },
             h.variant());
  if (h.scale() != 1.0) j["scale"] = h.scale();
}

SphereHamiltonian sphere_hamiltonian_from_json(const nlohmann::json& j) {
  const auto bad = [](const std::string& field, const std::string& why) {
    return Error(ErrorCode::ConfigInvalid, "field '" + field + "': " + why);
  };
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) throw bad("type", "missing or not a string");
  const auto type = j.at("type").get<std::string>();
  const auto number = [&](const nlohmann::json& v, const std::string& field) {
    if (!v.is_number()) throw bad(field, "expected a number");
    return v.get<double>();
  };

  std::optional<SphereHamiltonian> h;
  if (type == "linear") {
    if (!j.contains("c") || !j.at("c").is_array() || j.at("c").size() != 3) throw bad("c", "expected a 3-vector");
    const auto& c = j.at("c");
    h = SphereHamiltonian::linear(Vec3(number(c[0], "c"), number(c[1], "c"), number(c[2], "c")));
  } else if (type == "ambient_poly") {
    if (!j.contains("terms") || !j.at("terms").is_array()) throw bad("terms", "missing or not an array");
    std::vector<AmbientMonomial> terms;
    for (const auto& t : j.at("terms")) {
      if (!t.is_object() || !t.contains("exp") || !t.at("exp").is_array() || t.at("exp").size() != 3)
        throw bad("exp", "expected three integer exponents");
      AmbientMonomial m;
      for (std::size_t k = 0; k < 3; ++k) {
        if (!t.at("exp")[k].is_number_integer()) throw bad("exp", "expected integers");
        m.exponent[k] = t.at("exp")[k].get<int>();
      }
      if (!t.contains("coef")) throw bad("coef", "missing");
      m.coef = number(t.at("coef"), "coef");
      terms.push_back(m);
    }
    try {
      h = SphereHamiltonian::ambient_polynomial(std::move(terms));
    } catch (const Error& e) {
      throw bad("exp", e.what());
    }
  } else {
    throw bad("type", "unknown sphere Hamiltonian type '" + type + "'");
  }
  if (j.contains("scale")) h = h->scaled(number(j.at("scale"), "scale"));
  return *h;
}

}  // namespace genfun::sphere

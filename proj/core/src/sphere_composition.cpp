#include "genfun/sphere_composition.hpp"

#include <string>

namespace genfun::sphere {

namespace {

SolverConfig with_floor(SolverConfig cfg, double tol) {
  cfg.tol = std::max(cfg.tol, tol);
  return cfg;
}

// Gnomonic coordinates around x for both unknown midpoints.
struct MidpointChart {
  Vec3 center;
  std::array<Vec3, 2> frame;

  explicit MidpointChart(const SpherePoint& x) : center(x.vec()), frame(tangent_frame(x)) {}

  SpherePoint at(double a, double b) const { return SpherePoint(center + frame[0] * a + frame[1] * b); }
  SpherePoint first(const Vector& z) const { return at(z[0], z[1]); }
  SpherePoint second(const Vector& z) const { return at(z[2], z[3]); }
};

}  // namespace

SphereCompositionProblem::SphereCompositionProblem(const SphereHamiltonian& first, const SphereHamiltonian& second,
                                                   SolverConfig c)
    : SphereCompositionProblem(field_of(first), field_of(second), c) {}

SphereCompositionProblem::SphereCompositionProblem(SphereField first, SphereField second, SolverConfig c)
    : h1(std::move(first)), h2(std::move(second)), cfg(c) {
  cfg.validate();
  if (!h1.value || !h2.value || !h1.gradient || !h2.gradient)
    throw Error(ErrorCode::InvalidArgument, "sphere composition: Hamiltonians need values and gradients");
}

double sphere_triangle_functional(const SphereCompositionProblem& prob, const SpherePoint& x1,
                                  const SpherePoint& x2, const SpherePoint& x) {
  const SphereTriangle t = spherical_vertices_from_midpoints(x1, x2, x);
  return prob.h1.value(x1.vec()) + prob.h2.value(x2.vec()) +
         kAreaOrientation * spherical_triangle_area(t.p, t.q, t.r);
}

SphereComposedValue sphere_compose_genfun(const SphereCompositionProblem& prob, const SpherePoint& x) {
  const MidpointChart chart(x);
  const auto functional = [&](const Vector& z) {
    return sphere_triangle_functional(prob, chart.first(z), chart.second(z), x);
  };
  const auto stationarity = [&](const Vector& z) -> Vector { return fd_gradient(functional, z, kAreaFdStep); };

  SolverConfig cfg = with_floor(prob.cfg, kStationarityTol);
  cfg.fd_step = std::max(cfg.fd_step, kComposedMapFdStep);
  const SolveReport report = solve_newton(stationarity, Vector::Zero(4), cfg);
  if (!report.converged)
    throw Error(to_error_code(report.status), "spherical composition critical point not found (residual " +
                                                  std::to_string(report.residual_norm) + ")");

  const SpherePoint x1 = chart.first(report.root);
  const SpherePoint x2 = chart.second(report.root);

  // Envelope theorem: dH/dx is the partial of the functional in x with x1, x2 frozen.
  const auto& frame = chart.frame;
  const auto along = [&](double a, double b) {
    return sphere_triangle_functional(prob, x1, x2, SpherePoint(x.vec() + frame[0] * a + frame[1] * b));
  };
  const double h = kAreaFdStep;
  const double d0 = (along(h, 0) - along(-h, 0)) / (2.0 * h);
  const double d1 = (along(0, h) - along(0, -h)) / (2.0 * h);

  return SphereComposedValue{sphere_triangle_functional(prob, x1, x2, x), x1, x2, frame[0] * d0 + frame[1] * d1};
}

SphereField sphere_composed_field(const SphereCompositionProblem& prob) {
  SphereField out;
  out.value = [prob](const Vec3& p) { return sphere_compose_genfun(prob, SpherePoint(p)).value; };
  out.gradient = [prob](const Vec3& p) { return sphere_compose_genfun(prob, SpherePoint(p)).gradient; };
  return out;
}

double sphere_verify_composition(const SphereCompositionProblem& prob, std::span<const SpherePoint> samples) {
  const SphereField composite = sphere_composed_field(prob);
  SolverConfig outer = with_floor(prob.cfg, kComposedMapTol);
  outer.fd_step = std::max(outer.fd_step, kComposedMapFdStep);
  double worst = 0.0;
  for (const auto& p : samples) {
    const SpherePoint r = sphere_phi_forward(prob.h1, p, prob.cfg).point;
    const SpherePoint chained = sphere_phi_forward(prob.h2, r, prob.cfg).point;
    const SpherePoint direct = sphere_phi_forward(composite, p, outer).point;
    worst = std::max(worst, (direct.vec() - chained.vec()).norm());
  }
  return worst;
}

}  // namespace genfun::sphere

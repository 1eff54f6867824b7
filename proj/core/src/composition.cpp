#include "genfun/composition.hpp"

namespace genfun {

CompositionProblem::CompositionProblem(SymplecticStructure s, const HamiltonianSpec& first,
                                       const HamiltonianSpec& second, SolverConfig c)
    : CompositionProblem(std::move(s), field_of(first), field_of(second), c) {}

CompositionProblem::CompositionProblem(SymplecticStructure s, HamiltonianField first, HamiltonianField second,
                                       SolverConfig c)
    : space(std::move(s)), h1(std::move(first)), h2(std::move(second)), cfg(c) {
  cfg.validate();
  if (h1.dim != space.dim() || h2.dim != space.dim())
    throw Error(ErrorCode::DimensionMismatch, "composition: Hamiltonians must live on the same space");
  if (!h1.value || !h2.value || !h1.gradient || !h2.gradient)
    throw Error(ErrorCode::InvalidArgument, "composition: Hamiltonians need values and gradients");
}

double triangle_functional(const CompositionProblem& prob, const MidpointTriple& m) {
  return prob.h1.value(m.x1) + prob.h2.value(m.x2) +
         kAreaOrientation * triangle_area(prob.space, vertices_from_midpoints(m));
}

namespace {

// The area of the midpoint triangle is 2 [omega(x1, x) + omega(x, x2) + omega(x2, x1)],
// so its partials are
//   d/dx1 = 2 Omega^T (x2 - x),  d/dx2 = 2 Omega^T (x - x1),  d/dx = 2 Omega^T (x1 - x2).
struct AreaGradient {
  Vector d1, d2, dx;
};

AreaGradient area_gradient(const SymplecticStructure& space, const Vector& x1, const Vector& x2,
                           const Vector& x) {
  return {2.0 * space.flat(x2 - x), 2.0 * space.flat(x - x1), 2.0 * space.flat(x1 - x2)};
}

struct Stationarity {
  const CompositionProblem& prob;
  const PhasePoint& x;

  int dim() const { return prob.space.dim(); }

  Vector residual(const Vector& z) const {
    const int d = dim();
    const Vector x1 = z.head(d);
    const Vector x2 = z.tail(d);
    const AreaGradient a = area_gradient(prob.space, x1, x2, x);
    Vector r(2 * d);
    r.head(d) = prob.h1.gradient(x1) + kAreaOrientation * a.d1;
    r.tail(d) = prob.h2.gradient(x2) + kAreaOrientation * a.d2;
    return r;
  }

  // Off-diagonal blocks come from the area alone: d(2 Omega^T (x2 - x))/dx2 = 2 Omega^T.
  Matrix jacobian(const Vector& z) const {
    const int d = dim();
    const Matrix ot = prob.space.form().transpose();
    Matrix j = Matrix::Zero(2 * d, 2 * d);
    j.topLeftCorner(d, d) = prob.h1.hessian(z.head(d));
    j.bottomRightCorner(d, d) = prob.h2.hessian(z.tail(d));
    j.topRightCorner(d, d) = kAreaOrientation * 2.0 * ot;
    j.bottomLeftCorner(d, d) = -kAreaOrientation * 2.0 * ot;
    return j;
  }
};

SolveReport solve_stationarity(const CompositionProblem& prob, const PhasePoint& x, const Vector& start) {
  const Stationarity st{prob, x};
  JacobianMap jac;
  if (prob.h1.hessian && prob.h2.hessian) jac = [&st](const Vector& z) { return st.jacobian(z); };
  return solve_newton([&st](const Vector& z) { return st.residual(z); }, start, prob.cfg, jac);
}

}  // namespace

ComposedValue compose_genfun_numeric(const CompositionProblem& prob, const PhasePoint& x,
                                     bool check_uniqueness) {
  prob.space.check_dim(x, "x");
  const int d = prob.space.dim();
  Vector start(2 * d);
  start << x, x;
  const SolveReport report = solve_stationarity(prob, x, start);
  if (!report.converged)
    throw Error(to_error_code(report.status),
                "composition critical point not found (residual " + std::to_string(report.residual_norm) + ")");

  if (check_uniqueness) {
    Vector predictor(2 * d);
    predictor << x - 0.5 * prob.space.sharp(prob.h2.gradient(x)), x + 0.5 * prob.space.sharp(prob.h1.gradient(x));
    const SolveReport other = solve_stationarity(prob, x, predictor);
    if (other.converged && (other.root - report.root).norm() > 1e-6)
      throw Error(ErrorCode::MultipleRootSuspected, "two starts reached distinct critical points");
  }

  ComposedValue out;
  out.x1 = report.root.head(d);
  out.x2 = report.root.tail(d);
  out.value = triangle_functional(prob, MidpointTriple{out.x1, out.x2, x});
  out.gradient = kAreaOrientation * area_gradient(prob.space, out.x1, out.x2, x).dx;

  if (prob.h1.hessian && prob.h2.hessian) {
    // dz/dx = -J^{-1} dr/dx with dr/dx = kAreaOrientation * (-2 Omega^T, 2 Omega^T); then
    // d(grad H)/dx = kAreaOrientation * 2 Omega^T (dx1/dx - dx2/dx).
    const Stationarity st{prob, x};
    const Matrix ot = prob.space.form().transpose();
    Matrix dr_dx(2 * d, d);
    dr_dx.topRows(d) = -kAreaOrientation * 2.0 * ot;
    dr_dx.bottomRows(d) = kAreaOrientation * 2.0 * ot;
    const Matrix dz = -st.jacobian(report.root).partialPivLu().solve(dr_dx);
    out.hessian = kAreaOrientation * 2.0 * ot * (dz.topRows(d) - dz.bottomRows(d));
    out.hessian = 0.5 * (out.hessian + out.hessian.transpose()).eval();
  }
  return out;
}

QuadraticGenfun compose_quadratic_closed(const SymplecticStructure& space, const Matrix& s1, const Matrix& s2) {
  const Matrix phi = cayley_map_quadratic(space, s2) * cayley_map_quadratic(space, s1);
  return QuadraticGenfun{genfun_of_linear_map(space, phi), Vector::Zero(space.dim()), 0.0};
}

HamiltonianField composed_field(const CompositionProblem& prob) {
  HamiltonianField out;
  out.dim = prob.space.dim();
  out.value = [prob](const Vector& x) { return compose_genfun_numeric(prob, x).value; };
  out.gradient = [prob](const Vector& x) { return compose_genfun_numeric(prob, x).gradient; };
  if (prob.h1.hessian && prob.h2.hessian)
    out.hessian = [prob](const Vector& x) { return compose_genfun_numeric(prob, x).hessian; };
  return out;
}

double verify_composition(const CompositionProblem& prob, std::span<const PhasePoint> samples) {
  const MidpointMap first(prob.space, prob.h1, prob.cfg);
  const MidpointMap second(prob.space, prob.h2, prob.cfg);
  const MidpointMap composite(prob.space, composed_field(prob), prob.cfg);
  double worst = 0.0;
  for (const auto& p : samples) {
    const PhasePoint chained = second.forward(first.forward(p).point).point;
    const PhasePoint direct = composite.forward(p).point;
    worst = std::max(worst, (direct - chained).norm());
  }
  return worst;
}

}  // namespace genfun

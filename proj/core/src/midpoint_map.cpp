#include "genfun/midpoint_map.hpp"

#include <cmath>

namespace genfun {

namespace {

constexpr double kCayleyMinRcond = 1e-12;

[[noreturn]] void solver_failure(const SolveReport& r, const char* what) {
  throw Error(to_error_code(r.status),
              std::string(what) + " did not converge (residual " + std::to_string(r.residual_norm) + " after " +
                  std::to_string(r.iterations) + " iterations)");
}

}  // namespace

MidpointMap::MidpointMap(SymplecticStructure space, const HamiltonianSpec& h, SolverConfig cfg)
    : MidpointMap(std::move(space), field_of(h), cfg) {}

MidpointMap::MidpointMap(SymplecticStructure space, HamiltonianField h, SolverConfig cfg)
    : space_(std::move(space)), field_(std::move(h)), cfg_(cfg) {
  cfg_.validate();
  if (field_.dim != space_.dim())
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian and symplectic space differ in dimension");
  if (!field_.gradient) throw Error(ErrorCode::InvalidArgument, "Hamiltonian field has no gradient");
}

// Solves x - sign * u(x)/2 = endpoint; sign = +1 for forward (endpoint = P), -1 for inverse.
MidpointStep MidpointMap::solve(const PhasePoint& endpoint, double sign) const {
  space_.check_dim(endpoint, "point");
  const auto residual = [&](const Vector& x) -> Vector {
    return x - 0.5 * sign * space_.sharp(field_.gradient(x)) - endpoint;
  };
  JacobianMap jacobian;
  if (field_.hessian) {
    jacobian = [&](const Vector& x) -> Matrix {
      const Matrix hess = field_.hessian(x);
      Matrix du(space_.dim(), space_.dim());
      for (int j = 0; j < space_.dim(); ++j) du.col(j) = space_.sharp(hess.col(j));
      return Matrix::Identity(space_.dim(), space_.dim()) - 0.5 * sign * du;
    };
  }
  const SolveReport report = solve_newton(residual, endpoint, cfg_, jacobian);
  if (!report.converged) solver_failure(report, "midpoint equation");
  const Vector& x = report.root;
  return MidpointStep{2.0 * x - endpoint, x};
}

MidpointStep MidpointMap::forward(const PhasePoint& p) const { return solve(p, +1.0); }

MidpointStep MidpointMap::inverse(const PhasePoint& q) const { return solve(q, -1.0); }

Matrix cayley_map_quadratic(const SymplecticStructure& space, const Matrix& s) {
  const Matrix half_l = 0.5 * hamiltonian_matrix(space, s);
  const Matrix id = Matrix::Identity(space.dim(), space.dim());
  const Eigen::PartialPivLU<Matrix> lu(id - half_l);
  if (!(lu.rcond() > kCayleyMinRcond)) throw Error(ErrorCode::CayleySingular, "I - L/2 is singular");
  // (I + L/2)(I - L/2)^{-1}; the two factors commute.
  return lu.solve(id + half_l);
}

Matrix genfun_of_linear_map(const SymplecticStructure& space, const Matrix& phi) {
  if (phi.rows() != space.dim() || phi.cols() != space.dim())
    throw Error(ErrorCode::DimensionMismatch, "linear map has the wrong size");
  const Matrix id = Matrix::Identity(space.dim(), space.dim());
  const Eigen::PartialPivLU<Matrix> lu(phi + id);
  if (!(lu.rcond() > kCayleyMinRcond)) throw Error(ErrorCode::CayleySingular, "Phi + I is singular");
  // L = 2 (Phi - I)(Phi + I)^{-1}, again commuting factors.
  const Matrix l = 2.0 * lu.solve(phi - id);
  const Matrix s = space.form().transpose() * l;
  return 0.5 * (s + s.transpose());
}

Matrix forward_jacobian(const MidpointMap& map, const PhasePoint& p, double fd_step) {
  return fd_jacobian([&](const Vector& y) { return map.forward(y).point; }, p, fd_step);
}

double symplecticity_defect(const MidpointMap& map, const PhasePoint& p, double fd_step) {
  const Matrix d = forward_jacobian(map, p, fd_step);
  const Matrix& omega = map.space().form();
  return max_abs(d.transpose() * omega * d - omega);
}

VectorMap hamiltonian_vector_field(const SymplecticStructure& space, const HamiltonianField& h) {
  return [space, g = h.gradient](const Vector& x) { return space.sharp(g(x)); };
}

std::vector<double> default_order_eps() {
  std::vector<double> eps;
  for (int i = 0; i < 10; ++i) eps.push_back(std::pow(10.0, -2.0 - i / 9.0));
  return eps;
}

OrderFit infinitesimal_order(const MapFamily& family, const PhasePoint& p, std::span<const double> eps,
                             const ReferenceFlow& reference) {
  OrderFit fit;
  Vector velocity;
  if (!reference) {
    const MidpointMap unit = family(1.0);
    velocity = hamiltonian_vector_field(unit.space(), unit.field())(p);
  }
  for (double e : eps) {
    const PhasePoint q = family(e).forward(p).point;
    const PhasePoint ref = reference ? reference(e, p) : PhasePoint(p + e * velocity);
    fit.eps.push_back(e);
    fit.defects.push_back((q - ref).norm());
  }
  fit.slope = loglog_slope(fit.eps, fit.defects);
  return fit;
}

}  // namespace genfun

#include "genfun/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace genfun {

namespace {

// Jacobians with reciprocal condition number below this are treated as singular.
constexpr double kMinRcond = 1e-12;

double residual_norm_or_inf(const VectorMap& residual, const Vector& x) {
  const Vector r = residual(x);
  return all_finite(r) ? r.norm() : std::numeric_limits<double>::infinity();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver.tol must be > 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "solver.max_iter must be >= 1");
  if (!(damping > 0.0 && damping < 1.0))
    throw Error(ErrorCode::InvalidArgument, "solver.damping must lie in (0, 1)");
  if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver.fd_step must be > 0");
}

ErrorCode to_error_code(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::SingularJacobian: return ErrorCode::SingularJacobian;
    case SolveStatus::NonFiniteValue: return ErrorCode::NonFiniteValue;
    case SolveStatus::Converged:
    case SolveStatus::NoConvergence: break;
  }
  return ErrorCode::NoConvergence;
}

bool all_finite(const Vector& v) noexcept {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

SolveReport solve_newton(const VectorMap& residual, const Vector& x0, const SolverConfig& cfg,
                         const JacobianMap& jacobian) {
  cfg.validate();
  SolveReport report;
  report.root = x0;

  Vector r = residual(report.root);
  if (!all_finite(r)) {
    report.residual_norm = std::numeric_limits<double>::infinity();
    report.status = SolveStatus::NonFiniteValue;
    return report;
  }
  report.residual_norm = r.norm();

  while (true) {
    if (report.residual_norm <= cfg.tol) {
      report.converged = true;
      report.status = SolveStatus::Converged;
      return report;
    }
    if (report.iterations >= cfg.max_iter) {
      report.status = SolveStatus::NoConvergence;
      return report;
    }

    Matrix jac;
    try {
      jac = jacobian ? jacobian(report.root) : fd_jacobian(residual, report.root, cfg.fd_step);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteValue) throw;
      report.status = SolveStatus::NonFiniteValue;
      return report;
    }
    if (!jac.allFinite()) {
      report.status = SolveStatus::NonFiniteValue;
      return report;
    }

    const Eigen::PartialPivLU<Matrix> lu(jac);
    if (!(lu.rcond() > kMinRcond)) {
      report.status = SolveStatus::SingularJacobian;
      return report;
    }
    const Vector step = lu.solve(-r);

    // Backtracking: accept the first shortened step that lowers the residual.
    double t = 1.0;
    Vector trial = report.root + step;
    double trial_norm = residual_norm_or_inf(residual, trial);
    while (!(trial_norm < report.residual_norm) && t > 1e-10) {
      t *= cfg.damping;
      trial = report.root + t * step;
      trial_norm = residual_norm_or_inf(residual, trial);
    }
    ++report.iterations;
    if (!(trial_norm < report.residual_norm)) {
      // Stalled at the roundoff floor or in a region Newton cannot escape.
      report.status = SolveStatus::NoConvergence;
      return report;
    }
    report.root = std::move(trial);
    r = residual(report.root);
    report.residual_norm = trial_norm;
  }
}

Matrix fd_jacobian(const VectorMap& f, const Vector& x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "fd step must be > 0");
  Matrix jac;
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const Vector plus = f(probe);
    probe[j] = x[j] - h;
    const Vector minus = f(probe);
    probe[j] = x[j];
    if (!all_finite(plus) || !all_finite(minus))
      throw Error(ErrorCode::NonFiniteValue, "function not finite near column " + std::to_string(j));
    if (j == 0) jac.resize(plus.size(), x.size());
    jac.col(j) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const double plus = f(probe);
    probe[j] = x[j] - h;
    const double minus = f(probe);
    probe[j] = x[j];
    if (!std::isfinite(plus) || !std::isfinite(minus))
      throw Error(ErrorCode::NonFiniteValue, "function not finite near coordinate " + std::to_string(j));
    grad[j] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

Vector integrate_rk4(const VectorMap& rhs, Vector x, double duration, int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "rk4 needs at least one step");
  const double h = duration / steps;
  for (int i = 0; i < steps; ++i) {
    const Vector k1 = rhs(x);
    const Vector k2 = rhs(x + 0.5 * h * k1);
    const Vector k3 = rhs(x + 0.5 * h * k2);
    const Vector k4 = rhs(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "loglog_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) throw Error(ErrorCode::DegenerateFit, "need two positive samples for a log-log fit");
  const double denom = count * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw Error(ErrorCode::DegenerateFit, "abscissae coincide");
  return (count * sxy - sx * sy) / denom;
}

}  // namespace genfun

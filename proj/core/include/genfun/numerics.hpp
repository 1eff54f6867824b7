#pragma once

// Small dense nonlinear solver and finite-difference helpers shared by every
// implicit construction in the library.

#include <functional>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "genfun/errors.hpp"

namespace genfun {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using VectorMap = std::function<Vector(const Vector&)>;
using JacobianMap = std::function<Matrix(const Vector&)>;

struct SolverConfig {
  double tol = 1e-12;
  int max_iter = 50;
  /// Backtracking factor applied to the Newton step while the residual fails to decrease.
  double damping = 0.5;
  double fd_step = 1e-6;

  /// Throws Error(InvalidArgument) naming the offending field.
  void validate() const;
};

enum class SolveStatus { Converged, SingularJacobian, NoConvergence, NonFiniteValue };

struct SolveReport {
  Vector root;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::NoConvergence;
};

ErrorCode to_error_code(SolveStatus status) noexcept;

/// Damped Newton iteration on residual(x) = 0.
///
/// The Jacobian comes from `jacobian` when supplied, otherwise from central
/// differences with step cfg.fd_step. Each step is shortened by cfg.damping
/// until the Euclidean residual norm decreases. Failures never throw: the
/// best iterate is returned with converged == false and a status tag.
SolveReport solve_newton(const VectorMap& residual, const Vector& x0, const SolverConfig& cfg,
                         const JacobianMap& jacobian = {});

/// Central-difference Jacobian. Throws Error(NonFiniteValue) if f is not finite.
Matrix fd_jacobian(const VectorMap& f, const Vector& x, double h);

/// Central-difference gradient of a scalar function.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);

/// Classical fourth-order Runge-Kutta, fixed step, autonomous right-hand side.
Vector integrate_rk4(const VectorMap& rhs, Vector x, double duration, int steps);

/// Least-squares slope of log(y) against log(x). Throws Error(DegenerateFit)
/// when fewer than two strictly positive pairs are available.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Largest absolute entry.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool all_finite(const Vector& v) noexcept;

}  // namespace genfun

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "genfun/numerics.hpp"

using namespace genfun;

TEST(SolverConfig, RejectsBadValues) {
  SolverConfig cfg;
  cfg.tol = -1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.max_iter = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.fd_step = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_NO_THROW(SolverConfig{}.validate());
}

TEST(Newton, SolvesLinearSystemInOneStep) {
  Matrix a(2, 2);
  a << 3, 1, 1, 2;
  Vector b(2);
  b << 1, -1;
  const auto r = solve_newton([&](const Vector& x) -> Vector { return a * x - b; }, Vector::Zero(2), {},
                              [&](const Vector&) -> Matrix { return a; });
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2);
  EXPECT_LT((r.root - a.lu().solve(b)).norm(), 1e-14);
}

TEST(Newton, FiniteDifferenceJacobianFallback) {
  const auto r = solve_newton(
      [](const Vector& x) -> Vector {
        Vector f(2);
        f << x[0] * x[0] + x[1] * x[1] - 4.0, x[0] - x[1];
        return f;
      },
      Vector::Constant(2, 1.0), {});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.root[0], std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.root[1], std::sqrt(2.0), 1e-12);
}

TEST(Newton, ReportsSingularJacobian) {
  const auto r = solve_newton([](const Vector& x) -> Vector { return Vector::Constant(1, x[0] * x[0] + 1.0); },
                              Vector::Zero(1), {});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.status, SolveStatus::SingularJacobian);
  EXPECT_EQ(to_error_code(r.status), ErrorCode::SingularJacobian);
}

TEST(Newton, ReportsNoConvergenceWithoutRoot) {
  const auto r = solve_newton([](const Vector& x) -> Vector { return Vector::Constant(1, x[0] * x[0] + 1.0); },
                              Vector::Constant(1, 0.7), {});
  EXPECT_FALSE(r.converged);
  EXPECT_NE(r.status, SolveStatus::Converged);
}

TEST(FiniteDifferences, JacobianOfSmoothMap) {
  Vector x(2);
  x << 0.3, -0.4;
  const Matrix j = fd_jacobian(
      [](const Vector& y) -> Vector {
        Vector f(2);
        f << std::sin(y[0]) * y[1], std::exp(y[0] + y[1]);
        return f;
      },
      x, 1e-5);
  Matrix exact(2, 2);
  exact << std::cos(0.3) * -0.4, std::sin(0.3), std::exp(-0.1), std::exp(-0.1);
  EXPECT_LT(max_abs(j - exact), 1e-9);
}

TEST(FiniteDifferences, Gradient) {
  Vector x(3);
  x << 1.0, 2.0, -1.0;
  const Vector g = fd_gradient([](const Vector& y) { return y.squaredNorm(); }, x, 1e-4);
  EXPECT_LT((g - 2.0 * x).norm(), 1e-9);
}

TEST(Rk4, HarmonicOscillatorQuarterPeriod) {
  Vector x(2);
  x << 1.0, 0.0;
  const Vector end = integrate_rk4(
      [](const Vector& y) -> Vector {
        Vector v(2);
        v << y[1], -y[0];
        return v;
      },
      x, std::acos(-1.0) / 2.0, 200);
  EXPECT_NEAR(end[0], 0.0, 1e-9);
  EXPECT_NEAR(end[1], -1.0, 1e-9);
}

TEST(LogLogSlope, RecoversPowerLaw) {
  std::vector<double> x, y;
  for (double e : {1e-3, 2e-3, 5e-3, 1e-2}) {
    x.push_back(e);
    y.push_back(7.0 * e * e * e);
  }
  EXPECT_NEAR(loglog_slope(x, y), 3.0, 1e-12);
}

TEST(LogLogSlope, DegenerateInputs) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(loglog_slope(one, one), Error);
  const std::vector<double> x{1.0, 2.0}, y{0.0, 1.0};
  EXPECT_THROW(loglog_slope(x, y), Error);
}

TEST(Finite, DetectsNan) {
  Vector v = Vector::Zero(3);
  EXPECT_TRUE(all_finite(v));
  v[1] = std::nan("");
  EXPECT_FALSE(all_finite(v));
}

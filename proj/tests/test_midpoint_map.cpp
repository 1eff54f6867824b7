#include <cmath>

#include <gtest/gtest.h>

#include "genfun/midpoint_map.hpp"
#include "genfun/sampling.hpp"
#include "support/oracles.hpp"

using namespace genfun;

namespace {

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  cfg.fd_step = 1e-5;
  return cfg;
}

}  // namespace

TEST(MidpointMap, ZeroHamiltonianIsIdentity) {
  const auto space = SymplecticStructure::standard(2);
  const MidpointMap map(space, HamiltonianSpec::zero(4));
  SampleStream stream(21, "zero");
  for (int k = 0; k < 5; ++k) {
    const Vector p = stream.in_ball(4);
    EXPECT_EQ(map.forward(p).point, p);
    EXPECT_LE(symplecticity_defect(map, p), 1e-10);
  }
}

TEST(MidpointMap, LinearHamiltonianTranslates) {
  const auto space = SymplecticStructure::standard(1);
  Vector b(2);
  b << 0.3, -0.7;
  const MidpointMap map(space, HamiltonianSpec::quadratic(Matrix::Zero(2, 2), b));
  const Vector p = Vector::Zero(2);
  EXPECT_LT((map.forward(p).point - oracle::hamilton_velocity(b)).norm(), 1e-14);
}

TEST(MidpointMap, HarmonicOscillatorExample) {
  const auto space = SymplecticStructure::standard(1);
  Matrix expected(2, 2);
  expected << 0.6, 0.8, -0.8, 0.6;
  EXPECT_LT(max_abs(cayley_map_quadratic(space, Matrix::Identity(2, 2)) - expected), 1e-15);
  const MidpointMap map(space, HamiltonianSpec::quadratic(Matrix::Identity(2, 2)));
  Vector p(2);
  p << 1, 0;
  EXPECT_LT((map.forward(p).point - expected * p).norm(), 1e-12);
}

TEST(MidpointMap, AgreesWithFixedPointOracle) {
  SampleStream stream(22, "oracle");
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 2;
    const auto h = stream.polynomial(2 * n, 4).scaled(0.1);
    const MidpointMap map(SymplecticStructure::standard(n), h, tight());
    const Vector p = stream.in_ball(2 * n);
    const Vector expected = oracle::midpoint_step([&](const Vector& x) { return h.gradient(x); }, p);
    const auto step = map.forward(p);
    EXPECT_LT((step.point - expected).norm(), 1e-12);
    EXPECT_LT((step.midpoint - 0.5 * (p + step.point)).norm(), 1e-15);
  }
}

TEST(MidpointMap, MidpointCarriesTheHamiltonianVector) {
  SampleStream stream(23, "construction");
  const auto space = SymplecticStructure::standard(2);
  for (int k = 0; k < 10; ++k) {
    const auto h = stream.polynomial(4, 3).scaled(0.2);
    const MidpointMap map(space, h, tight());
    const Vector p = stream.in_ball(4);
    const auto step = map.forward(p);
    EXPECT_LT((step.point - p - hamiltonian_displacement(space, h, step.midpoint)).norm(), 1e-12);
  }
}

TEST(MidpointMap, InverseUndoesForward) {
  SampleStream stream(24, "inverse");
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 2;
    const auto h = stream.polynomial(2 * n, 4).scaled(0.2);
    const MidpointMap map(SymplecticStructure::standard(n), h, tight());
    const Vector p = stream.in_ball(2 * n);
    const auto q = map.forward(p);
    EXPECT_LT((map.inverse(q.point).point - p).norm(), 1e-12);
    EXPECT_LT((phi_inverse(map, phi_forward(map, p).point).point - p).norm(), 1e-12);
  }
}

TEST(MidpointMap, TranslationEquivariance) {
  SampleStream stream(25, "translation");
  const auto space = SymplecticStructure::standard(1);
  const auto h = HamiltonianSpec::builtin("pendulum").scaled(0.3);
  const MidpointMap map(space, h, tight());
  for (int k = 0; k < 10; ++k) {
    const Vector shift = stream.in_ball(2, 5.0);
    const MidpointMap moved(space, translated(field_of(h), shift), tight());
    const Vector p = stream.in_ball(2);
    EXPECT_LT((moved.forward(p + shift).point - (map.forward(p).point + shift)).norm(), 1e-9);
  }
}

TEST(MidpointMap, CayleyAgreementProperty) {
  SampleStream stream(26, "cayley");
  for (int k = 0; k < 30; ++k) {
    const int n = 1 + k % 2;
    const auto space = SymplecticStructure::standard(n);
    const Matrix s = stream.symmetric_matrix(2 * n, stream.uniform(0.1, 1.0));
    const Matrix phi = cayley_map_quadratic(space, s);
    const Vector p = stream.in_ball(2 * n);
    EXPECT_LT((MidpointMap(space, HamiltonianSpec::quadratic(s), tight()).forward(p).point - phi * p).norm(), 1e-10);
    EXPECT_LT(max_abs(phi.transpose() * space.form() * phi - space.form()), 1e-13);
    EXPECT_LT(max_abs(genfun_of_linear_map(space, phi) - s), 1e-10);
    if (n == 1) {
      EXPECT_LT(max_abs(phi - Matrix(oracle::cayley(s))), 1e-14);
    }
  }
}

TEST(MidpointMap, InverseCayleyOfRotation) {
  const auto space = SymplecticStructure::standard(1);
  const double angle = 2.0 * std::atan(0.5);
  Matrix rot(2, 2);
  rot << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
  EXPECT_LT(max_abs(genfun_of_linear_map(space, rot) - Matrix::Identity(2, 2)), 1e-14);
}

TEST(MidpointMap, CayleySingularities) {
  const auto space = SymplecticStructure::standard(1);
  try {
    genfun_of_linear_map(space, -Matrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CayleySingular);
  }
  // L = diag(2, -2), so I - L/2 is singular.
  Matrix s(2, 2);
  s << 0, 2, 2, 0;
  try {
    cayley_map_quadratic(space, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CayleySingular);
  }
}

TEST(MidpointMap, SymplecticityDefect) {
  const auto space = SymplecticStructure::standard(1);
  Vector p(2);
  p << 0.3, 0.2;
  EXPECT_LE(symplecticity_defect(MidpointMap(space, HamiltonianSpec::builtin("pendulum"), tight()), p, 1e-5), 1e-6);
  SampleStream stream(27, "defect");
  for (int k = 0; k < 20; ++k) {
    const Matrix s = stream.symmetric_matrix(2, 1.0);
    const MidpointMap map(space, HamiltonianSpec::quadratic(s), tight());
    const Vector x = stream.in_ball(2);
    EXPECT_LE(symplecticity_defect(map, x, 1e-5), 1e-8);
    EXPECT_LT(max_abs(forward_jacobian(map, x, 1e-5) - cayley_map_quadratic(space, s)), 1e-8);
  }
}

TEST(MidpointMap, InfinitesimalOrder) {
  const auto space = SymplecticStructure::standard(1);
  const auto h = HamiltonianSpec::builtin("pendulum");
  Vector p(2);
  p << 0.4, 0.3;
  const auto eps = default_order_eps();
  const MapFamily family = [&](double e) { return MidpointMap(space, h.scaled(e), tight()); };
  EXPECT_GE(infinitesimal_order(family, p, eps).slope, 1.9);

  const ReferenceFlow rk4 = [&](double e, const PhasePoint& x) {
    return integrate_rk4([&](const Vector& y) { return hamiltonian_displacement(space, h, y); }, x, e, 64);
  };
  EXPECT_GE(infinitesimal_order(family, p, eps, rk4).slope, 2.5);
}

TEST(MidpointMap, NonConvergenceIsTyped) {
  const auto space = SymplecticStructure::standard(1);
  SolverConfig cfg;
  cfg.max_iter = 2;
  const MidpointMap map(space, HamiltonianSpec::builtin("pendulum").scaled(40.0), cfg);
  Vector p(2);
  p << 2.0, 1.0;
  try {
    map.forward(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::NoConvergence || e.code() == ErrorCode::SingularJacobian);
  }
}

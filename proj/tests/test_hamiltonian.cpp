#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "genfun/hamiltonian.hpp"
#include "genfun/sampling.hpp"
#include "support/oracles.hpp"

using namespace genfun;

namespace {

Vector point(double q, double p) {
  Vector x(2);
  x << q, p;
  return x;
}

}  // namespace

TEST(Hamiltonian, QuadraticValueGradientHessian) {
  Matrix s(2, 2);
  s << 2, 1, 1, 3;
  Vector b(2);
  b << 0.5, -1;
  const auto h = HamiltonianSpec::quadratic(s, b, 0.25);
  const Vector x = point(1.0, 2.0);
  EXPECT_DOUBLE_EQ(h.value(x), 0.5 * (2 + 4 + 12) + 0.5 - 2 + 0.25);
  EXPECT_LT((h.gradient(x) - (s * x + b)).norm(), 1e-15);
  EXPECT_LT(max_abs(h.hessian(x) - s), 1e-15);
  EXPECT_TRUE(h.is_quadratic());
}

TEST(Hamiltonian, QuadraticRejectsAsymmetric) {
  Matrix s(2, 2);
  s << 1, 2, 0, 1;
  EXPECT_THROW(HamiltonianSpec::quadratic(s), Error);
  EXPECT_THROW(HamiltonianSpec::quadratic(Matrix::Identity(3, 3)), Error);
}

TEST(Hamiltonian, Pendulum) {
  const auto h = HamiltonianSpec::builtin("pendulum");
  const Vector x = point(0.3, 0.2);
  EXPECT_DOUBLE_EQ(h.value(x), 0.02 - std::cos(0.3));
  EXPECT_NEAR(h.gradient(x)[0], std::sin(0.3), 1e-15);
  EXPECT_NEAR(h.gradient(x)[1], 0.2, 1e-15);
  EXPECT_THROW(HamiltonianSpec::builtin("kepler"), Error);
}

TEST(Hamiltonian, PolynomialDerivativesMatchFiniteDifferences) {
  SampleStream stream(11, "poly-derivatives");
  for (int k = 0; k < 20; ++k) {
    const int dim = 2 + 2 * (k % 2);
    const auto h = stream.polynomial(dim, 4);
    const Vector x = stream.in_ball(dim);
    const Vector fd = fd_gradient([&](const Vector& y) { return h.value(y); }, x, 1e-5);
    EXPECT_LT((h.gradient(x) - fd).norm(), 1e-8);
    const Matrix fd_hess = fd_jacobian([&](const Vector& y) { return h.gradient(y); }, x, 1e-5);
    EXPECT_LT(max_abs(h.hessian(x) - fd_hess), 1e-8);
  }
}

TEST(Hamiltonian, ScaledMultipliesEverything) {
  const auto h = HamiltonianSpec::builtin("pendulum").scaled(0.1).scaled(3.0);
  const Vector x = point(0.7, -0.4);
  const auto base = HamiltonianSpec::builtin("pendulum");
  EXPECT_NEAR(h.value(x), 0.3 * base.value(x), 1e-15);
  EXPECT_LT((h.gradient(x) - 0.3 * base.gradient(x)).norm(), 1e-15);
  EXPECT_LT(max_abs(h.hessian(x) - 0.3 * base.hessian(x)), 1e-15);
}

TEST(Hamiltonian, ZeroAndDimensionChecks) {
  const auto z = HamiltonianSpec::zero(4);
  EXPECT_EQ(z.dim(), 4);
  EXPECT_EQ(z.value(Vector::Ones(4)), 0.0);
  EXPECT_THROW(z.value(Vector::Ones(2)), Error);
  EXPECT_THROW(HamiltonianSpec::zero(3), Error);
}

TEST(Hamiltonian, DisplacementIsHamiltonsEquations) {
  SampleStream stream(12, "displacement");
  const auto space = SymplecticStructure::standard(2);
  for (int k = 0; k < 10; ++k) {
    const auto h = stream.polynomial(4, 3);
    const Vector x = stream.in_ball(4);
    const Vector u = hamiltonian_displacement(space, h, x);
    EXPECT_LT((u - oracle::hamilton_velocity(h.gradient(x))).norm(), 1e-14);
    // d_x H = u -| omega
    EXPECT_LT((space.flat(u) - h.gradient(x)).norm(), 1e-14);
  }
}

TEST(Hamiltonian, TranslatedField) {
  const auto h = HamiltonianSpec::builtin("pendulum");
  const Vector shift = point(0.5, -1.0);
  const auto t = translated(field_of(h), shift);
  const Vector x = point(0.1, 0.2);
  EXPECT_DOUBLE_EQ(t.value(x), h.value(x - shift));
  EXPECT_LT((t.gradient(x) - h.gradient(x - shift)).norm(), 1e-15);
}

TEST(HamiltonianJson, RoundTrip) {
  SampleStream stream(13, "json");
  std::vector<HamiltonianSpec> specs{HamiltonianSpec::builtin("pendulum").scaled(0.25),
                                     HamiltonianSpec::quadratic(stream.symmetric_matrix(4, 0.5), stream.in_ball(4), 0.5),
                                     stream.polynomial(2, 4)};
  for (const auto& h : specs) {
    nlohmann::json j = h;
    const auto back = hamiltonian_from_json(nlohmann::json::parse(j.dump()));
    const Vector x = stream.in_ball(h.dim());
    EXPECT_EQ(back.dim(), h.dim());
    EXPECT_DOUBLE_EQ(back.value(x), h.value(x));
  }
}

TEST(HamiltonianJson, Errors) {
  const auto expect_config_error = [](const char* text) {
    try {
      hamiltonian_from_json(nlohmann::json::parse(text));
      ADD_FAILURE() << "accepted " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid) << text;
    }
  };
  expect_config_error(R"({"S": [[1]]})");
  expect_config_error(R"({"type": "cubic"})");
  expect_config_error(R"({"type": "quadratic", "S": [[1, 0], [1]]})");
  expect_config_error(R"({"type": "quadratic", "S": [[1, 2], [0, 1]]})");
  expect_config_error(R"({"type": "polynomial", "terms": [{"exp": [1], "coef": 1}]})");
  expect_config_error(R"({"type": "builtin", "name": "kepler"})");
}

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "genfun/composition.hpp"
#include "genfun/moyal.hpp"
#include "genfun/sampling.hpp"
#include "support/oracles.hpp"

using namespace genfun;

namespace {

PolynomialSymbol monomial(int dim, std::vector<int> exp, ComplexRational c = ComplexRational(1), int hbar = 0) {
  PolynomialSymbol s(dim);
  s.add_term(std::move(exp), c, hbar);
  return s;
}

PolynomialSymbol random_symbol(SampleStream& stream, int dim, int max_degree) {
  PolynomialSymbol s(dim);
  for (int k = stream.uniform_int(1, 4); k > 0; --k) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    for (int d = stream.uniform_int(0, max_degree); d > 0; --d) ++e[static_cast<std::size_t>(stream.uniform_int(0, dim - 1))];
    s.add_term(std::move(e), ComplexRational(Rational(stream.uniform_int(-5, 5), stream.uniform_int(1, 3)),
                                             Rational(stream.uniform_int(-5, 5), stream.uniform_int(1, 3))));
  }
  return s;
}

}  // namespace

TEST(MoyalKernel, UnitModulusAreaPhase) {
  SampleStream stream(41, "kernel");
  const auto space = SymplecticStructure::standard(1);
  for (int k = 0; k < 10; ++k) {
    const MidpointTriple m{stream.in_ball(2), stream.in_ball(2), stream.in_ball(2)};
    const Vector p = m.x1 - m.x2 + m.x;
    const Vector q = -m.x1 + m.x2 + m.x;
    const Vector r = m.x1 + m.x2 - m.x;
    const auto kval = kernel(space, m, PlanckParameter(0.3));
    EXPECT_NEAR(std::abs(kval), 1.0, 1e-15);
    const auto expected = std::polar(1.0, -oracle::shoelace_area(p, q, r) / 0.3);
    EXPECT_LT(std::abs(kval - expected), 1e-13);
  }
  EXPECT_THROW(PlanckParameter(0.0), Error);
  EXPECT_THROW(PlanckParameter(-1.0), Error);
}

TEST(StarProduct, CanonicalPair) {
  const auto q = PolynomialSymbol::coordinate(2, 0);
  const auto p = PolynomialSymbol::coordinate(2, 1);
  const auto half_i_hbar = PolynomialSymbol::constant(2, ComplexRational(0, Rational(1, 2))).scaled(ComplexRational(1), 1);
  EXPECT_EQ(star_product_poly(q, p), q * p + half_i_hbar);
  EXPECT_EQ(star_product_poly(p, q), q * p - half_i_hbar);
}

TEST(StarProduct, SquaresExample) {
  // q^2 * p^2 = q^2 p^2 + 2 i hbar q p - hbar^2 / 2
  const auto f = monomial(2, {2, 0});
  const auto g = monomial(2, {0, 2});
  auto expected = monomial(2, {2, 2});
  expected += monomial(2, {1, 1}, ComplexRational(0, 2), 1);
  expected += monomial(2, {0, 0}, ComplexRational(Rational(-1, 2)), 2);
  EXPECT_EQ(star_product_poly(f, g), expected);
}

TEST(StarProduct, TruncatedOrders) {
  const auto f = monomial(2, {2, 0});
  const auto g = monomial(2, {0, 2});
  EXPECT_EQ(star_product_poly(f, g, 0), f * g);
  EXPECT_EQ(star_product_poly(f, g, 1), f * g + monomial(2, {1, 1}, ComplexRational(0, 2), 1));
}

TEST(StarProduct, SemiclassicalExpansion) {
  SampleStream stream(42, "semiclassical");
  for (int dim : {2, 4}) {
    for (int k = 0; k < 10; ++k) {
      const auto f = random_symbol(stream, dim, 3);
      const auto g = random_symbol(stream, dim, 3);
      const auto fg = star_product_poly(f, g);
      const auto gf = star_product_poly(g, f);
      EXPECT_EQ(fg.hbar_coefficient(0), f * g);
      EXPECT_EQ((fg - gf).hbar_coefficient(1), poisson_bracket(f, g).scaled(ComplexRational(0, 1)));
      EXPECT_TRUE((fg - gf).hbar_coefficient(2).is_zero());
      EXPECT_EQ((fg + gf).hbar_coefficient(1), PolynomialSymbol(dim));
    }
  }
}

TEST(StarProduct, LinearCommutatorIsExact) {
  SampleStream stream(43, "linear");
  const auto f = PolynomialSymbol::coordinate(4, 1).scaled(ComplexRational(3)) + PolynomialSymbol::coordinate(4, 2);
  for (int k = 0; k < 10; ++k) {
    const auto g = random_symbol(stream, 4, 4);
    EXPECT_EQ(star_product_poly(f, g) - star_product_poly(g, f), poisson_bracket(f, g).scaled(ComplexRational(0, 1), 1));
  }
}

TEST(StarProduct, UnitAndAssociativity) {
  SampleStream stream(44, "assoc");
  const auto one = PolynomialSymbol::constant(2, ComplexRational(1));
  for (int k = 0; k < 10; ++k) {
    const auto f = random_symbol(stream, 2, 3);
    const auto g = random_symbol(stream, 2, 3);
    const auto h = random_symbol(stream, 2, 3);
    EXPECT_EQ(star_product_poly(one, f), f);
    EXPECT_EQ(star_product_poly(f, one), f);
    EXPECT_EQ(star_product_poly(star_product_poly(f, g), h), star_product_poly(f, star_product_poly(g, h)));
  }
}

TEST(StarProduct, EvaluateAtHbar) {
  const auto s = star_product_poly(monomial(2, {2, 0}), monomial(2, {0, 2}));
  const auto c = s.at(PlanckParameter(0.5));
  EXPECT_EQ(c.at({2, 2}), std::complex<double>(1.0, 0.0));
  EXPECT_EQ(c.at({1, 1}), std::complex<double>(0.0, 1.0));
  EXPECT_EQ(c.at({0, 0}), std::complex<double>(-0.125, 0.0));
}

TEST(StarProduct, DimensionMismatch) {
  EXPECT_THROW(star_product_poly(PolynomialSymbol(2), PolynomialSymbol(4)), Error);
}

TEST(Symbol, DerivativeAndDegree) {
  const auto f = monomial(2, {3, 1}, ComplexRational(2));
  EXPECT_EQ(f.degree(), 4);
  EXPECT_EQ(f.derivative(0, 2), monomial(2, {1, 1}, ComplexRational(12)));
  EXPECT_TRUE(f.derivative(1, 2).is_zero());
  EXPECT_EQ(PolynomialSymbol(2).degree(), -1);
}

TEST(Symbol, JsonRoundTrip) {
  auto f = monomial(2, {1, 2}, ComplexRational(Rational(1, 2), Rational(-3, 4)));
  f += monomial(2, {0, 0}, ComplexRational(2), 2);
  nlohmann::json j = f;
  EXPECT_EQ(symbol_from_json(nlohmann::json::parse(j.dump())), f);
}

TEST(GaussianProduct, PhaseIsComposedGeneratingFunction) {
  SampleStream stream(45, "gaussian");
  for (int k = 0; k < 10; ++k) {
    const int n = 1 + k % 2;
    const auto space = SymplecticStructure::standard(n);
    const Matrix s1 = stream.symmetric_matrix(2 * n, 0.5);
    const Matrix s2 = stream.symmetric_matrix(2 * n, 0.5);
    const Vector x = stream.in_ball(2 * n);
    const auto g = gaussian_phase_product(space, s1, s2, x, PlanckParameter(1.0));
    EXPECT_NEAR(g.phase, 0.5 * x.dot(compose_quadratic_closed(space, s1, s2).s * x), 1e-12);
    if (n == 1) {
      EXPECT_NEAR(g.phase, 0.5 * x.dot(Matrix(oracle::composed_quadratic(s1, s2)) * x), 1e-12);
    }
  }
}

TEST(GaussianProduct, IdentityPairValue) {
  const auto space = SymplecticStructure::standard(1);
  Vector x(2);
  x << 1, 0;
  const auto g = gaussian_phase_product(space, Matrix::Identity(2, 2), Matrix::Identity(2, 2), x, PlanckParameter(1.0));
  EXPECT_NEAR(g.phase, 4.0 / 3.0, 1e-12);
}

TEST(GaussianProduct, AmplitudeScalesWithHbar) {
  SampleStream stream(46, "amplitude");
  const auto space = SymplecticStructure::standard(1);
  const Matrix s1 = stream.symmetric_matrix(2, 0.5);
  const Matrix s2 = stream.symmetric_matrix(2, 0.5);
  const Vector x = stream.in_ball(2);
  const auto a = gaussian_phase_product(space, s1, s2, x, PlanckParameter(0.1));
  const auto b = gaussian_phase_product(space, s1, s2, x, PlanckParameter(0.4));
  EXPECT_DOUBLE_EQ(a.phase, b.phase);
  // four integration variables: (2 pi hbar)^2
  EXPECT_NEAR(b.log_amplitude.real() - a.log_amplitude.real(), 2.0 * std::log(4.0), 1e-12);
  EXPECT_NEAR(b.log_amplitude.imag(), a.log_amplitude.imag(), 1e-15);
}

TEST(GaussianProduct, HalfTurnsAreDegenerate) {
  // Two quarter turns compose to -I, which has no midpoint generating function.
  const auto space = SymplecticStructure::standard(1);
  const Matrix s = 2.0 * Matrix::Identity(2, 2);
  try {
    gaussian_phase_product(space, s, s, Vector::Zero(2), PlanckParameter(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegeneratePhase);
  }
}

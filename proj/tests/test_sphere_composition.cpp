#include <gtest/gtest.h>

#include "genfun/sampling.hpp"
#include "genfun/sphere_composition.hpp"
#include "support/oracles.hpp"

using namespace genfun;
using namespace genfun::sphere;

namespace {

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  return cfg;
}

}  // namespace

TEST(SphereComposition, FunctionalUsesSphericalArea) {
  SampleStream stream(71, "functional");
  const auto h1 = SphereHamiltonian::linear(Vec3(0.1, 0, 0.2));
  const auto h2 = SphereHamiltonian::ambient_polynomial({{{1, 1, 0}, 0.3}});
  const SphereCompositionProblem prob(h1, h2, tight());
  const SpherePoint p(0.9, 0.1, 0.3), q(0.7, -0.3, 0.5), r(0.8, 0.2, 0.6);
  const SpherePoint x1 = geodesic_midpoint(p, r), x2 = geodesic_midpoint(r, q), x = geodesic_midpoint(p, q);
  const double expected = h1.value(x1.vec()) + h2.value(x2.vec()) - oracle::girard_area(p.vec(), q.vec(), r.vec());
  EXPECT_NEAR(sphere_triangle_functional(prob, x1, x2, x), expected, 1e-10);
}

TEST(SphereComposition, CoaxialRotationsAdd) {
  const Vec3 c(0, 0, 0.2);
  const auto h = SphereHamiltonian::linear(c);
  const SphereCompositionProblem prob(h, h, tight());
  SampleStream stream(72, "coaxial");
  const auto composed = sphere_composed_field(prob);
  // The composed gradient comes from finite differences, so the outer solve cannot reach 1e-12.
  SolverConfig outer;
  outer.tol = kComposedMapTol;
  for (int k = 0; k < 5; ++k) {
    const SpherePoint p = stream.on_sphere();
    const Mat3 twice = oracle::rotation(c.normalized(), 2.0 * oracle::linear_sphere_angle(c, p.vec()));
    EXPECT_LT((sphere_phi_forward(composed, p, outer).point.vec() - twice * p.vec()).norm(), 1e-8);
  }
}

TEST(SphereComposition, VerifyAmbientPair) {
  SampleStream stream(73, "verify");
  const auto h1 = SphereHamiltonian::ambient_polynomial({{{0, 0, 1}, 0.1}, {{1, 1, 0}, 0.05}});
  const auto h2 = SphereHamiltonian::ambient_polynomial({{{0, 0, 2}, 0.1}, {{1, 0, 0}, 0.05}});
  std::vector<SpherePoint> samples;
  for (int k = 0; k < 5; ++k) samples.push_back(stream.on_sphere());
  EXPECT_LE(sphere_verify_composition({h1, h2, tight()}, samples), 1e-5);
}

TEST(SphereComposition, ZeroSecondFactor) {
  const auto h1 = SphereHamiltonian::linear(Vec3(0.1, -0.2, 0.1));
  const SphereCompositionProblem prob(h1, SphereHamiltonian::linear(Vec3::Zero()), tight());
  const SpherePoint x(0.3, 0.3, 0.9);
  const auto v = sphere_compose_genfun(prob, x);
  // The second map is the identity, so R = Q: x1 = x and x2 = Q.
  const SpherePair pq = tangent_to_pair(sphere_hamiltonian_vector(h1, x));
  EXPECT_NEAR(v.value, h1.value(x.vec()), 1e-10);
  EXPECT_LT((v.x1.vec() - x.vec()).norm(), 1e-9);
  EXPECT_LT((v.x2.vec() - pq.second.vec()).norm(), 1e-9);
}

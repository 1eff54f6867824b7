#include <benchmark/benchmark.h>

#include "genfun/composition.hpp"
#include "genfun/moyal.hpp"
#include "genfun/sampling.hpp"
#include "genfun/sphere_composition.hpp"

using namespace genfun;

static void BM_PhiForwardPendulum(benchmark::State& state) {
  const MidpointMap map(SymplecticStructure::standard(1), HamiltonianSpec::builtin("pendulum").scaled(0.01));
  Vector p(2);
  p << 2.0, 0.0;
  for (auto _ : state) {
    p = map.forward(p).point;
    benchmark::DoNotOptimize(p.data());
  }
}
BENCHMARK(BM_PhiForwardPendulum);

static void BM_PhiForwardPolynomial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SampleStream stream(1, "bench");
  const MidpointMap map(SymplecticStructure::standard(n), stream.polynomial(2 * n, 4).scaled(0.1));
  const Vector p = stream.in_ball(2 * n);
  for (auto _ : state) benchmark::DoNotOptimize(map.forward(p).point.data());
}
BENCHMARK(BM_PhiForwardPolynomial)->Arg(1)->Arg(2)->Arg(4);

static void BM_ComposeNumeric(benchmark::State& state) {
  const auto space = SymplecticStructure::standard(1);
  const CompositionProblem prob(space, HamiltonianSpec::builtin("pendulum").scaled(0.1),
                                HamiltonianSpec::builtin("pendulum").scaled(0.2));
  Vector x(2);
  x << 0.3, -0.2;
  for (auto _ : state) benchmark::DoNotOptimize(compose_genfun_numeric(prob, x).value);
}
BENCHMARK(BM_ComposeNumeric);

static void BM_SphereForward(benchmark::State& state) {
  const auto field = sphere::field_of(sphere::SphereHamiltonian::ambient_polynomial({{{0, 0, 1}, 0.3}, {{1, 1, 0}, 0.1}}));
  const sphere::SpherePoint p(0.3, -0.5, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(sphere::sphere_phi_forward(field, p).point.vec().data());
}
BENCHMARK(BM_SphereForward);

static void BM_SphereCompose(benchmark::State& state) {
  const auto h = sphere::SphereHamiltonian::linear(sphere::Vec3(0, 0, 0.2));
  const sphere::SphereCompositionProblem prob(h, h);
  const sphere::SpherePoint x(0.3, -0.5, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(sphere::sphere_compose_genfun(prob, x).value);
}
BENCHMARK(BM_SphereCompose);

static void BM_StarProduct(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  PolynomialSymbol f(2), g(2);
  for (int a = 0; a <= degree; ++a) {
    f.add_term({a, degree - a}, ComplexRational(a + 1));
    g.add_term({degree - a, a}, ComplexRational(0, a + 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(star_product_poly(f, g).terms().size());
}
BENCHMARK(BM_StarProduct)->Arg(2)->Arg(4)->Arg(6);

BENCHMARK_MAIN();

#include "acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "genfun/composition.hpp"
#include "genfun/moyal.hpp"
#include "genfun/sampling.hpp"
#include "genfun/sphere_composition.hpp"

namespace genfun::cli {

namespace {

using sphere::SpherePoint;
using sphere::Vec3;

// Collects named checks; a criterion passes when every check does.
class Checks {
 public:
  void at_most(const std::string& what, double value, double bound) {
    add(what, value <= bound, value, "<=", bound);
  }
  void below(const std::string& what, double value, double bound) { add(what, value < bound, value, "<", bound); }
  void at_least(const std::string& what, double value, double bound) {
    add(what, value >= bound, value, ">=", bound);
  }
  void require(const std::string& what, bool ok) {
    ok_ = ok_ && ok;
    sep();
    text_ << what << (ok ? " ok" : " FAILED");
  }

  bool ok() const { return ok_; }
  std::string text() const { return text_.str(); }

 private:
  void add(const std::string& what, bool ok, double value, const char* op, double bound) {
    ok_ = ok_ && ok;
    sep();
    text_.precision(3);
    text_ << what << "=" << value << " " << op << " " << bound << (ok ? "" : " FAILED");
  }
  void sep() {
    if (!first_) text_ << "; ";
    first_ = false;
  }

  bool ok_ = true;
  bool first_ = true;
  std::ostringstream text_;
};

template <class F>
bool throws_code(ErrorCode code, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

SolverConfig tight() {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  cfg.fd_step = 1e-5;
  return cfg;
}

// 1. Random polynomial Hamiltonians: the midpoint map is symplectic.
Checks symplecticity(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-1");
  for (int n : {1, 2}) {
    const auto space = SymplecticStructure::standard(n);
    long attempted = 0, converged = 0;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const MidpointMap map(space, stream.polynomial(2 * n, 4), tight());
      for (int i = 0; i < 10; ++i) {
        const Vector p = stream.in_ball(2 * n);
        ++attempted;
        try {
          worst = std::max(worst, symplecticity_defect(map, p, 1e-6));
          ++converged;
        } catch (const Error&) {
        }
      }
    }
    const std::string tag = "n=" + std::to_string(n);
    c.at_most(tag + " max defect", worst, 1e-6);
    c.at_least(tag + " converged fraction", static_cast<double>(converged) / static_cast<double>(attempted), 0.95);
  }
  return c;
}

// 2. Quadratic H: the midpoint map is the Cayley transform.
Checks cayley(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-2");
  double forward = 0.0, round_trip = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 2;
    const auto space = SymplecticStructure::standard(n);
    const Matrix s = stream.symmetric_matrix(2 * n, stream.uniform(0.05, 1.0));
    const Matrix phi = cayley_map_quadratic(space, s);
    const MidpointMap map(space, HamiltonianSpec::quadratic(s), tight());
    for (int i = 0; i < 5; ++i) {
      const Vector p = stream.in_ball(2 * n);
      forward = std::max(forward, (map.forward(p).point - phi * p).norm());
    }
    round_trip = std::max(round_trip, max_abs(cayley_map_quadratic(space, genfun_of_linear_map(space, phi)) - phi));
    round_trip = std::max(round_trip, max_abs(genfun_of_linear_map(space, phi) - s));
  }
  c.at_most("phi_forward vs Cayley", forward, 1e-10);
  c.at_most("inverse Cayley round trip", round_trip, 1e-10);
  const auto space = SymplecticStructure::standard(1);
  c.require("Phi=-I raises CayleySingular", throws_code(ErrorCode::CayleySingular, [&] {
              genfun_of_linear_map(space, -Matrix::Identity(2, 2));
            }));
  return c;
}

// 3. Quadratic H with b = 0 is conserved exactly by its own map.
Checks quadratic_invariant(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-3");
  double worst = 0.0;
  long applications = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 2;
    const auto space = SymplecticStructure::standard(n);
    const auto h = HamiltonianSpec::quadratic(stream.symmetric_matrix(2 * n, stream.uniform(0.05, 3.0)));
    const MidpointMap map(space, h, tight());
    for (int i = 0; i < 10; ++i) {
      const Vector p = stream.in_ball(2 * n, 2.0);
      try {
        const Vector q = map.forward(p).point;
        worst = std::max(worst, std::abs(h.value(q) - h.value(p)));
        ++applications;
      } catch (const Error&) {
      }
    }
  }
  c.at_least("converged applications", static_cast<double>(applications), 1.0);
  c.at_most("max |H(Q)-H(P)|", worst, 1e-10);
  return c;
}

// 4. Composition of quadratics against the closed form.
Checks composition_closed(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-4");
  double verify = 0.0, swapped = 0.0, values = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 2;
    const auto space = SymplecticStructure::standard(n);
    const Matrix s1 = stream.symmetric_matrix(2 * n, stream.uniform(0.05, 0.5));
    const Matrix s2 = stream.symmetric_matrix(2 * n, stream.uniform(0.05, 0.5));
    const auto h1 = HamiltonianSpec::quadratic(s1);
    const auto h2 = HamiltonianSpec::quadratic(s2);
    std::vector<PhasePoint> samples;
    for (int i = 0; i < 20; ++i) samples.push_back(stream.in_ball(2 * n));
    verify = std::max(verify, verify_composition(CompositionProblem(space, h1, h2, tight()), samples));
    swapped = std::max(swapped, verify_composition(CompositionProblem(space, h2, h1, tight()), samples));

    const auto closed = compose_quadratic_closed(space, s1, s2);
    const CompositionProblem prob(space, h1, h2, tight());
    for (int i = 0; i < 5; ++i) {
      const Vector x = stream.in_ball(2 * n);
      values = std::max(values, std::abs(compose_genfun_numeric(prob, x).value - 0.5 * x.dot(closed.s * x)));
    }
  }
  c.at_most("verify_composition", verify, 1e-8);
  c.at_most("verify_composition (order swapped)", swapped, 1e-8);
  c.at_most("numeric vs closed-form H", values, 1e-6);
  const auto space = SymplecticStructure::standard(1);
  const Matrix id = Matrix::Identity(2, 2);
  c.at_most("S1=S2=I gives (8/3) I", max_abs(compose_quadratic_closed(space, id, id).s - (8.0 / 3.0) * id), 1e-10);
  return c;
}

// 5. Composition of nonlinear generating functions.
Checks composition_nonlinear(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-5");
  const auto space = SymplecticStructure::standard(1);
  const auto pendulum = HamiltonianSpec::builtin("pendulum").scaled(0.1);
  const auto cubic = stream.polynomial(2, 3).scaled(0.1);
  std::vector<PhasePoint> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(stream.in_ball(2));
  c.at_most("pendulum then cubic", verify_composition(CompositionProblem(space, pendulum, cubic, tight()), samples), 1e-6);
  c.at_most("cubic then pendulum", verify_composition(CompositionProblem(space, cubic, pendulum, tight()), samples), 1e-6);
  c.at_most("pendulum then pendulum",
            verify_composition(CompositionProblem(space, HamiltonianSpec::builtin("pendulum"), pendulum, tight()), samples),
            1e-6);
  return c;
}

PolynomialSymbol random_symbol(SampleStream& stream, int dim, int max_degree) {
  PolynomialSymbol s(dim);
  const int terms = stream.uniform_int(1, 4);
  for (int k = 0; k < terms; ++k) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    const int degree = stream.uniform_int(0, max_degree);
    for (int d = 0; d < degree; ++d) ++e[static_cast<std::size_t>(stream.uniform_int(0, dim - 1))];
    s.add_term(std::move(e), ComplexRational(Rational(stream.uniform_int(-9, 9), stream.uniform_int(1, 4)),
                                             Rational(stream.uniform_int(-9, 9), stream.uniform_int(1, 4))));
  }
  return s;
}

// 6. Moyal: exact Gaussian phase and star-product identities.
Checks moyal(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-6");
  double phase = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 2;
    const auto space = SymplecticStructure::standard(n);
    const Matrix s1 = stream.symmetric_matrix(2 * n, stream.uniform(0.05, 0.5));
    const Matrix s2 = stream.symmetric_matrix(2 * n, stream.uniform(0.05, 0.5));
    const auto closed = compose_quadratic_closed(space, s1, s2);
    for (int i = 0; i < 5; ++i) {
      const Vector x = stream.in_ball(2 * n);
      const auto g = gaussian_phase_product(space, s1, s2, x, PlanckParameter(0.7));
      phase = std::max(phase, std::abs(g.phase - 0.5 * x.dot(closed.s * x)));
    }
  }
  c.at_most("Gaussian phase vs composed H", phase, 1e-8);

  bool unit = true, commutator = true, associative = true;
  for (int n : {1, 2}) {
    const int dim = 2 * n;
    const auto one = PolynomialSymbol::constant(dim, ComplexRational(1));
    for (int i = 0; i < n; ++i) {
      const auto q = PolynomialSymbol::coordinate(dim, i);
      const auto p = PolynomialSymbol::coordinate(dim, n + i);
      const auto i_hbar = PolynomialSymbol::constant(dim, ComplexRational(0, 1)).scaled(ComplexRational(1), 1);
      commutator = commutator && star_product_poly(q, p) - star_product_poly(p, q) == i_hbar;
    }
    for (int k = 0; k < 10; ++k) {
      const auto f = random_symbol(stream, dim, 3);
      const auto g = random_symbol(stream, dim, 3);
      const auto h = random_symbol(stream, dim, 3);
      unit = unit && star_product_poly(one, f) == f && star_product_poly(f, one) == f;
      associative =
          associative && star_product_poly(star_product_poly(f, g), h) == star_product_poly(f, star_product_poly(g, h));
    }
  }
  c.require("unit element", unit);
  c.require("q*p - p*q = i hbar", commutator);
  c.require("associativity (degree <= 3)", associative);
  return c;
}

// 7. Pairs of sphere points <-> short tangent vectors.
Checks sphere_identification(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-7");
  double law = 0.0, longest = 0.0, round_trip = 0.0, pullback = 0.0;
  int count = 0;
  while (count < 1000) {
    const SpherePoint p = stream.on_sphere();
    const SpherePoint q = stream.on_sphere();
    if ((p.vec() + q.vec()).norm() < 1e-3) continue;
    const auto t = sphere::pair_to_tangent(p, q);
    law = std::max(law, std::abs(t.u.norm() - 2.0 * std::sin(0.5 * sphere::geodesic_distance(p, q))));
    longest = std::max(longest, t.u.norm());
    const auto back = sphere::tangent_to_pair(t);
    round_trip = std::max({round_trip, (back.first.vec() - p.vec()).norm(), (back.second.vec() - q.vec()).norm()});
    if (count < 50) pullback = std::max(pullback, sphere::pullback_defect(p, q, 1e-5));
    ++count;
  }
  c.at_most("| |u| - 2 sin(d/2) |", law, 1e-10);
  c.below("max |u| - 2", longest - 2.0, 0.0);
  c.at_most("tangent/pair round trip", round_trip, 1e-12);
  c.at_most("pullback defect (50 pairs)", pullback, 1e-5);
  return c;
}

sphere::SphereHamiltonian tilted_top() {
  return sphere::SphereHamiltonian::ambient_polynomial({{{0, 0, 1}, 0.3}, {{1, 1, 0}, 0.1}});
}

sphere::SphereHamiltonian quadratic_top() {
  return sphere::SphereHamiltonian::ambient_polynomial({{{0, 0, 2}, 0.25}, {{1, 0, 0}, 0.1}, {{0, 1, 1}, 0.15}});
}

// 8. The spherical midpoint map.
Checks sphere_map(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-8");
  const auto cfg = tight();
  double det = 0.0;
  for (const auto& h : {tilted_top(), quadratic_top()}) {
    const auto field = sphere::field_of(h);
    for (int i = 0; i < 50; ++i)
      det = std::max(det, std::abs(sphere::area_jacobian_determinant(field, stream.on_sphere(), cfg) - 1.0));
  }
  c.at_most("|det DPhi - 1| (100 points)", det, 1e-6);

  double slope = std::numeric_limits<double>::infinity();
  const auto eps = default_order_eps();
  for (const auto& h : {tilted_top(), quadratic_top()}) {
    const auto field = sphere::field_of(h);
    for (int i = 0; i < 5; ++i) {
      const SpherePoint p = stream.on_sphere();
      std::vector<double> defects;
      for (double e : eps) {
        const auto q = sphere::sphere_phi_forward(h.scaled(e), p, cfg).point;
        defects.push_back((q.vec() - sphere::sphere_reference_flow(field, p, e, 64).vec()).norm());
      }
      slope = std::min(slope, loglog_slope(eps, defects));
    }
  }
  c.at_least("infinitesimal slope vs reference flow", slope, 2.0);

  double equivariance = 0.0;
  for (const auto& h : {tilted_top(), quadratic_top()}) {
    const auto field = sphere::field_of(h);
    for (int i = 0; i < 20; ++i) {
      const auto rot = stream.rotation();
      const SpherePoint p = stream.on_sphere();
      const Vec3 lhs = sphere::sphere_phi_forward(sphere::rotated(field, rot), SpherePoint(rot * p.vec()), cfg).point.vec();
      const Vec3 rhs = rot * sphere::sphere_phi_forward(field, p, cfg).point.vec();
      equivariance = std::max(equivariance, (lhs - rhs).norm());
    }
  }
  c.at_most("rotational equivariance", equivariance, 1e-9);
  return c;
}

// 9. Spherical composition and midpoint-triangle reconstruction.
Checks sphere_composition(std::uint64_t seed) {
  Checks c;
  SampleStream stream(seed, "acceptance-9");
  std::vector<SpherePoint> samples;
  for (int i = 0; i < 10; ++i) samples.push_back(stream.on_sphere());
  const auto linear = sphere::SphereHamiltonian::linear(Vec3(0, 0, 0.2));
  c.at_most("H1=H2=0.2 e_z.p", sphere::sphere_verify_composition({linear, linear, tight()}, samples), 1e-5);
  const auto a = tilted_top().scaled(0.1 / 0.3);
  const auto b = quadratic_top().scaled(0.1 / 0.25);
  c.at_most("ambient polynomial pair", sphere::sphere_verify_composition({a, b, tight()}, samples), 1e-5);

  double reconstruction = 0.0;
  for (int k = 0; k < 100; ++k) {
    // Vertices within a cap of geodesic radius 1 around a random centre.
    const SpherePoint centre = stream.on_sphere();
    const auto frame = sphere::tangent_frame(centre);
    const auto vertex = [&] {
      const Vector t = stream.in_ball(2, std::tan(1.0));
      return SpherePoint(centre.vec() + frame[0] * t[0] + frame[1] * t[1]);
    };
    const SpherePoint p = vertex(), q = vertex(), r = vertex();
    const SpherePoint x1 = sphere::geodesic_midpoint(p, r);
    const SpherePoint x2 = sphere::geodesic_midpoint(r, q);
    const SpherePoint x = sphere::geodesic_midpoint(p, q);
    const auto t = sphere::spherical_vertices_from_midpoints(x1, x2, x);
    reconstruction = std::max({reconstruction, (sphere::geodesic_midpoint(t.p, t.r).vec() - x1.vec()).norm(),
                               (sphere::geodesic_midpoint(t.r, t.q).vec() - x2.vec()).norm(),
                               (sphere::geodesic_midpoint(t.p, t.q).vec() - x.vec()).norm()});
  }
  c.at_most("midpoint reconstruction (100 triples)", reconstruction, 1e-10);
  return c;
}

struct Drift {
  double first = 0.0;
  double second = 0.0;
  double max() const { return std::max(first, second); }
};

Drift orbit_drift(const HamiltonianSpec& h, double eps, Vector x, int steps) {
  const MidpointMap map(SymplecticStructure::standard(h.dim() / 2), h.scaled(eps), tight());
  const double h0 = h.value(x);
  Drift d;
  for (int k = 1; k <= steps; ++k) {
    x = map.forward(x).point;
    double& bucket = k <= steps / 2 ? d.first : d.second;
    bucket = std::max(bucket, std::abs(h.value(x) - h0));
  }
  return d;
}

// 10. Long orbits: bounded energy error, exact quadratic conservation.
Checks orbit(std::uint64_t) {
  Checks c;
  Vector start(2);
  start << 2.0, 0.0;
  const Drift pendulum = orbit_drift(HamiltonianSpec::builtin("pendulum"), 0.01, start, 10000);
  c.at_most("pendulum max |dH|", pendulum.max(), 1e-4);
  c.at_most("second-half / first-half drift", pendulum.second / pendulum.first, 1.5);
  const auto harmonic = HamiltonianSpec::quadratic(Matrix::Identity(2, 2));
  double quadratic = 0.0;
  for (double eps : {0.01, 0.5}) quadratic = std::max(quadratic, orbit_drift(harmonic, eps, start, 10000).max());
  c.at_most("harmonic max |dH|", quadratic, 1e-10);
  return c;
}

struct Criterion {
  const char* name;
  std::function<Checks(std::uint64_t)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"symplecticity", symplecticity},
      {"cayley-agreement", cayley},
      {"quadratic-invariant", quadratic_invariant},
      {"composition-closed-form", composition_closed},
      {"composition-nonlinear", composition_nonlinear},
      {"moyal-classical-part", moyal},
      {"sphere-identification", sphere_identification},
      {"spherical-map", sphere_map},
      {"spherical-composition", sphere_composition},
      {"orbit", orbit},
  };
  return all;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriterionCount) throw Error(ErrorCode::InvalidArgument, "criterion id out of range");
  const auto& criterion = criteria()[static_cast<std::size_t>(id - 1)];
  CriterionResult result{id, criterion.name, false, {}, 0.0};
  const auto start = std::chrono::steady_clock::now();
  try {
    const Checks checks = criterion.run(seed);
    result.pass = checks.ok();
    result.detail = checks.text();
  } catch (const std::exception& e) {
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

bool run_acceptance(std::ostream& out, std::optional<int> only, std::uint64_t seed) {
  bool all = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (only && *only != id) continue;
    const auto r = run_criterion(id, seed);
    all = all && r.pass;
    out << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " (" << std::fixed;
    out.precision(2);
    out << r.seconds << " s): " << std::defaultfloat << r.detail << '\n';
  }
  return all;
}

}  // namespace genfun::cli

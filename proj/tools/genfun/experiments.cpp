#include "experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <thread>

#include "genfun/composition.hpp"
#include "genfun/moyal.hpp"
#include "genfun/sampling.hpp"
#include "genfun/sphere_composition.hpp"

namespace genfun::cli {

namespace {

using Rows = std::vector<ReportRow>;

std::vector<double> flatten(const Vector& v) { return {v.data(), v.data() + v.size()}; }
std::vector<double> flatten(const sphere::SpherePoint& p) { return {p.vec()[0], p.vec()[1], p.vec()[2]}; }

template <class... Vs>
std::vector<double> concat(const Vs&... vs) {
  std::vector<double> out;
  (out.insert(out.end(), vs.begin(), vs.end()), ...);
  return out;
}

// Evaluates `job(i)` for i in [0, count) on up to `threads` workers and
// concatenates the row blocks in index order.
Rows parallel_rows(int count, unsigned threads, const std::function<Rows(int)>& job) {
  std::vector<Rows> blocks(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < count; i = next++) blocks[static_cast<std::size_t>(i)] = job(i);
  };
  const unsigned n = std::max(1u, std::min(threads, static_cast<unsigned>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  Rows out;
  for (auto& b : blocks) std::move(b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// One row per metric; an Error thrown by `compute` marks every listed metric failed.
Rows measured(const std::string& experiment, int sample, const std::vector<double>& inputs,
              const std::vector<std::string>& metrics, const std::function<std::vector<double>()>& compute) {
  Rows rows;
  std::vector<std::variant<double, ErrorCode>> values;
  try {
    for (double v : compute()) values.emplace_back(v);
  } catch (const Error& e) {
    values.assign(metrics.size(), e.code());
  }
  for (std::size_t k = 0; k < metrics.size(); ++k)
    rows.push_back(ReportRow{experiment, sample, inputs, metrics[k], values[k]});
  return rows;
}

double pick(const std::optional<double>& override_value, double fallback) { return override_value.value_or(fallback); }

struct Plan {
  Rows rows;
  std::vector<MetricSpec> metrics;
  nlohmann::json extra = nlohmann::json::object();
};

Plan affine_flow(const ExperimentConfig& cfg, unsigned threads) {
  const auto space = SymplecticStructure::standard(cfg.n);
  const auto& h = cfg.hamiltonians.front();
  SampleStream stream(cfg.seed, "flow");
  std::vector<Vector> points;
  for (int i = 0; i < cfg.samples; ++i) points.push_back(stream.in_ball(2 * cfg.n, cfg.params.radius));

  const auto eps = default_order_eps();
  const MapFamily family = [&](double e) { return MidpointMap(space, h.scaled(e), cfg.solver); };
  const auto field = field_of(h);
  const auto rhs = hamiltonian_vector_field(space, field);
  const ReferenceFlow exact = [&](double e, const PhasePoint& p) { return integrate_rk4(rhs, p, e, 64); };

  Plan plan;
  plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    return measured("flow", i, flatten(p), {"first_order_slope", "flow_slope"}, [&] {
      return std::vector<double>{infinitesimal_order(family, p, eps).slope,
                                 infinitesimal_order(family, p, eps, exact).slope};
    });
  });
  plan.metrics = {{"first_order_slope", Bound::AtLeast, pick(cfg.params.threshold, 1.9)},
                  {"flow_slope", Bound::AtLeast, 2.5}};
  return plan;
}

Plan sphere_flow(const ExperimentConfig& cfg, unsigned threads) {
  const auto field = sphere::field_of(cfg.sphere_hamiltonians.front());
  SampleStream stream(cfg.seed, "flow");
  std::vector<sphere::SpherePoint> points;
  for (int i = 0; i < cfg.samples; ++i) points.push_back(stream.on_sphere());
  const auto eps = default_order_eps();

  Plan plan;
  plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    return measured("flow", i, flatten(p), {"flow_slope"}, [&] {
      std::vector<double> defects;
      for (double e : eps) {
        const auto scaled = sphere::SphereField{[&](const sphere::Vec3& x) { return e * field.value(x); },
                                                [&](const sphere::Vec3& x) -> sphere::Vec3 { return e * field.gradient(x); }};
        const auto image = sphere::sphere_phi_forward(scaled, p, cfg.solver).point;
        const auto ref = sphere::sphere_reference_flow(field, p, e, 64);
        defects.push_back((image.vec() - ref.vec()).norm());
      }
      return std::vector<double>{loglog_slope(eps, defects)};
    });
  });
  plan.metrics = {{"flow_slope", Bound::AtLeast, pick(cfg.params.threshold, 2.0)}};
  return plan;
}

Plan check_symplectic(const ExperimentConfig& cfg, unsigned threads) {
  Plan plan;
  if (cfg.space == SpaceKind::Affine) {
    const MidpointMap map(SymplecticStructure::standard(cfg.n), cfg.hamiltonians.front(), cfg.solver);
    SampleStream stream(cfg.seed, "check-symplectic");
    std::vector<Vector> points;
    for (int i = 0; i < cfg.samples; ++i) points.push_back(stream.in_ball(2 * cfg.n, cfg.params.radius));
    plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
      const auto& p = points[static_cast<std::size_t>(i)];
      return measured("check-symplectic", i, flatten(p), {"symplecticity_defect"},
                      [&] { return std::vector<double>{symplecticity_defect(map, p, cfg.solver.fd_step)}; });
    });
    plan.metrics = {{"symplecticity_defect", Bound::AtMost, pick(cfg.params.threshold, 1e-6)}};
  } else {
    const auto field = sphere::field_of(cfg.sphere_hamiltonians.front());
    SampleStream stream(cfg.seed, "check-symplectic");
    std::vector<sphere::SpherePoint> points;
    for (int i = 0; i < cfg.samples; ++i) points.push_back(stream.on_sphere());
    plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
      const auto& p = points[static_cast<std::size_t>(i)];
      return measured("check-symplectic", i, flatten(p), {"area_determinant_error"}, [&] {
        return std::vector<double>{std::abs(sphere::area_jacobian_determinant(field, p, cfg.solver) - 1.0)};
      });
    });
    plan.metrics = {{"area_determinant_error", Bound::AtMost, pick(cfg.params.threshold, 1e-6)}};
  }
  return plan;
}

bool centered_quadratic(const HamiltonianSpec& h) {
  const auto* q = std::get_if<QuadraticHamiltonian>(&h.variant());
  return q && q->b.isZero(0.0) && q->c == 0.0;
}

Matrix quadratic_matrix(const HamiltonianSpec& h) { return h.hessian(Vector::Zero(h.dim())); }

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Plan compose(const ExperimentConfig& cfg, unsigned threads) {
  Plan plan;
  if (cfg.space == SpaceKind::Sphere) {
    const sphere::SphereCompositionProblem prob(cfg.sphere_hamiltonians[0], cfg.sphere_hamiltonians[1], cfg.solver);
    SampleStream stream(cfg.seed, "compose");
    std::vector<sphere::SpherePoint> points;
    for (int i = 0; i < cfg.samples; ++i) points.push_back(stream.on_sphere());
    plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
      const auto& p = points[static_cast<std::size_t>(i)];
      return measured("compose", i, flatten(p), {"composition_residual"}, [&] {
        return std::vector<double>{sphere::sphere_verify_composition(prob, std::span(&p, 1))};
      });
    });
    plan.metrics = {{"composition_residual", Bound::AtMost, pick(cfg.params.threshold, 1e-5)}};
    return plan;
  }

  const auto space = SymplecticStructure::standard(cfg.n);
  const auto& h1 = cfg.hamiltonians[0];
  const auto& h2 = cfg.hamiltonians[1];
  const CompositionProblem prob(space, h1, h2, cfg.solver);
  const bool closed = centered_quadratic(h1) && centered_quadratic(h2);
  std::optional<QuadraticGenfun> closed_form;
  if (closed) {
    try {
      closed_form = compose_quadratic_closed(space, quadratic_matrix(h1), quadratic_matrix(h2));
      plan.extra["closed_form_S"] = matrix_json(closed_form->s);
    } catch (const Error& e) {
      plan.extra["closed_form_error"] = std::string(to_string(e.code()));
    }
  }

  SampleStream stream(cfg.seed, "compose");
  std::vector<Vector> points;
  for (int i = 0; i < cfg.samples; ++i) points.push_back(stream.in_ball(2 * cfg.n, cfg.params.radius));
  plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    Rows rows = measured("compose", i, flatten(p), {"composition_residual"},
                         [&] { return std::vector<double>{verify_composition(prob, std::span(&p, 1))}; });
    if (closed_form) {
      Rows more = measured("compose", i, flatten(p), {"numeric_vs_closed"}, [&] {
        const double numeric = compose_genfun_numeric(prob, p).value;
        return std::vector<double>{std::abs(numeric - 0.5 * p.dot(closed_form->s * p))};
      });
      rows.insert(rows.end(), more.begin(), more.end());
    }
    return rows;
  });
  plan.metrics = {{"composition_residual", Bound::AtMost, pick(cfg.params.threshold, closed ? 1e-8 : 1e-6)}};
  if (closed_form) plan.metrics.push_back({"numeric_vs_closed", Bound::AtMost, 1e-8});
  return plan;
}

// Exact star-product identities on a few random integer-coefficient symbols.
nlohmann::json star_identities(std::uint64_t seed, int n) {
  SampleStream stream(seed, "moyal-symbols");
  const int dim = 2 * n;
  const auto random_symbol = [&] {
    PolynomialSymbol s(dim);
    for (int k = 0; k < 4; ++k) {
      std::vector<int> e(static_cast<std::size_t>(dim), 0);
      int budget = stream.uniform_int(0, 3);
      while (budget-- > 0) ++e[static_cast<std::size_t>(stream.uniform_int(0, dim - 1))];
      s.add_term(std::move(e), ComplexRational(Rational(stream.uniform_int(-5, 5)), Rational(stream.uniform_int(-5, 5))));
    }
    return s;
  };
  const auto one = PolynomialSymbol::constant(dim, ComplexRational(1));
  bool unit = true;
  bool associative = true;
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_symbol();
    const auto g = random_symbol();
    const auto h = random_symbol();
    unit = unit && star_product_poly(one, f) == f && star_product_poly(f, one) == f;
    associative = associative && star_product_poly(star_product_poly(f, g), h) == star_product_poly(f, star_product_poly(g, h));
  }
  bool commutator = true;
  for (int i = 0; i < n; ++i) {
    const auto q = PolynomialSymbol::coordinate(dim, i);
    const auto p = PolynomialSymbol::coordinate(dim, n + i);
    const auto expected = PolynomialSymbol::constant(dim, ComplexRational(0, 1)).scaled(ComplexRational(1), 1);
    commutator = commutator && (star_product_poly(q, p) - star_product_poly(p, q)) == expected;
  }
  return {{"unit", unit}, {"commutator_q_p", commutator}, {"associativity", associative}};
}

Plan moyal_verify(const ExperimentConfig& cfg, unsigned threads) {
  const auto space = SymplecticStructure::standard(cfg.n);
  const Matrix s1 = quadratic_matrix(cfg.hamiltonians[0]);
  const Matrix s2 = quadratic_matrix(cfg.hamiltonians[1]);
  const PlanckParameter hbar(cfg.params.hbar);
  Plan plan;
  std::optional<QuadraticGenfun> closed_form;
  try {
    closed_form = compose_quadratic_closed(space, s1, s2);
    plan.extra["closed_form_S"] = matrix_json(closed_form->s);
  } catch (const Error& e) {
    plan.extra["closed_form_error"] = std::string(to_string(e.code()));
  }

  SampleStream stream(cfg.seed, "moyal-verify");
  std::vector<Vector> points;
  for (int i = 0; i < cfg.samples; ++i) points.push_back(stream.in_ball(2 * cfg.n, cfg.params.radius));
  plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
    const auto& x = points[static_cast<std::size_t>(i)];
    return measured("moyal-verify", i, flatten(x), {"phase_vs_composed", "log_amplitude_re", "log_amplitude_im"}, [&] {
      if (!closed_form) throw Error(ErrorCode::CayleySingular, "no closed-form composition");
      const auto g = gaussian_phase_product(space, s1, s2, x, hbar);
      return std::vector<double>{std::abs(g.phase - 0.5 * x.dot(closed_form->s * x)), g.log_amplitude.real(),
                                 g.log_amplitude.imag()};
    });
  });
  plan.metrics = {{"phase_vs_composed", Bound::AtMost, pick(cfg.params.threshold, 1e-8)},
                  {"log_amplitude_re", Bound::None, 0.0},
                  {"log_amplitude_im", Bound::None, 0.0}};
  plan.extra["star_identities"] = star_identities(cfg.seed, cfg.n);
  return plan;
}

Plan sphere_identify(const ExperimentConfig& cfg, unsigned threads) {
  SampleStream stream(cfg.seed, "sphere-identify");
  std::vector<std::pair<sphere::SpherePoint, sphere::SpherePoint>> pairs;
  while (static_cast<int>(pairs.size()) < cfg.samples) {
    auto p = stream.on_sphere();
    auto q = stream.on_sphere();
    if ((p.vec() + q.vec()).norm() > 1e-3) pairs.emplace_back(p, q);
  }
  Plan plan;
  plan.rows = parallel_rows(cfg.samples, threads, [&](int i) {
    const auto& [p, q] = pairs[static_cast<std::size_t>(i)];
    return measured("sphere-identify", i, concat(flatten(p), flatten(q)),
                    {"length_law_error", "tangent_norm", "round_trip_error", "pullback_defect"}, [&] {
                      const auto t = sphere::pair_to_tangent(p, q);
                      const double d = sphere::geodesic_distance(p, q);
                      const auto back = sphere::tangent_to_pair(t);
                      const double round_trip =
                          std::max((back.first.vec() - p.vec()).norm(), (back.second.vec() - q.vec()).norm());
                      return std::vector<double>{std::abs(t.u.norm() - 2.0 * std::sin(0.5 * d)), t.u.norm(),
                                                 round_trip, sphere::pullback_defect(p, q, 1e-5)};
                    });
  });
  plan.metrics = {{"length_law_error", Bound::AtMost, pick(cfg.params.threshold, 1e-10)},
                  {"tangent_norm", Bound::Below, 2.0},
                  {"round_trip_error", Bound::AtMost, 1e-12},
                  {"pullback_defect", Bound::AtMost, 1e-5}};
  return plan;
}

Plan orbit(const ExperimentConfig& cfg) {
  const auto space = SymplecticStructure::standard(cfg.n);
  const auto& h = cfg.hamiltonians.front();
  const double eps = cfg.params.epsilon;
  const MidpointMap map(space, h.scaled(eps), cfg.solver);
  Vector x = cfg.params.initial.value_or(Vector::Zero(2 * cfg.n));
  if (!cfg.params.initial) x[0] = 2.0;

  Plan plan;
  const double h0 = h.value(x);
  const int steps = cfg.params.steps;
  std::vector<double> drift;
  plan.rows.push_back(ReportRow{"orbit", 0, flatten(x), "H", h0});
  bool truncated = false;
  for (int k = 1; k <= steps; ++k) {
    try {
      x = map.forward(x).point;
    } catch (const Error& e) {
      plan.rows.push_back(ReportRow{"orbit", k, flatten(x), "H", e.code()});
      truncated = true;
      break;
    }
    const double hk = h.value(x);
    drift.push_back(std::abs(hk - h0));
    plan.rows.push_back(ReportRow{"orbit", k, flatten(x), "H", hk});
  }

  const auto half = drift.size() / 2;
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < drift.size(); ++i) {
    double& bucket = i < half ? first : second;
    bucket = std::max(bucket, drift[i]);
  }
  const double max_drift = std::max(first, second);
  const double threshold = pick(cfg.params.threshold, 1e-4);
  const bool no_secular = second <= 1.5 * first || max_drift == 0.0;

  // Explicit RK4 at the same step, for contrast.
  const auto rhs = hamiltonian_vector_field(space, field_of(h));
  Vector y = cfg.params.initial.value_or(Vector::Zero(2 * cfg.n));
  if (!cfg.params.initial) y[0] = 2.0;
  double rk4_drift = 0.0;
  for (int k = 1; k <= steps && !truncated; ++k) {
    y = integrate_rk4(rhs, y, eps, 1);
    rk4_drift = std::max(rk4_drift, std::abs(h.value(y) - h0));
  }

  plan.metrics = {{"H", Bound::None, 0.0}};
  plan.extra["max_abs_dH"] = max_drift;
  plan.extra["max_abs_dH_first_half"] = first;
  plan.extra["max_abs_dH_second_half"] = second;
  plan.extra["rk4_max_abs_dH"] = rk4_drift;
  plan.extra["threshold"] = threshold;
  plan.extra["truncated"] = truncated;
  plan.extra["orbit_pass"] = !truncated && max_drift <= threshold && no_secular;
  return plan;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  Plan plan;
  switch (cfg.experiment) {
    case Experiment::Flow:
      plan = cfg.space == SpaceKind::Affine ? affine_flow(cfg, threads) : sphere_flow(cfg, threads);
      break;
    case Experiment::CheckSymplectic: plan = check_symplectic(cfg, threads); break;
    case Experiment::Compose: plan = compose(cfg, threads); break;
    case Experiment::MoyalVerify: plan = moyal_verify(cfg, threads); break;
    case Experiment::SphereIdentify: plan = sphere_identify(cfg, threads); break;
    case Experiment::Orbit: plan = orbit(cfg); break;
  }

  RunResult result;
  result.rows = std::move(plan.rows);
  nlohmann::json metrics = nlohmann::json::object();
  bool pass = true;
  for (const auto& spec : plan.metrics) {
    auto m = summarize_metric(spec, result.rows);
    pass = pass && m.at("pass").get<bool>();
    metrics[spec.name] = std::move(m);
  }
  if (plan.extra.contains("orbit_pass")) pass = pass && plan.extra.at("orbit_pass").get<bool>();
  if (plan.extra.contains("star_identities"))
    for (const auto& [name, ok] : plan.extra.at("star_identities").items()) pass = pass && ok.get<bool>();

  result.summary = {{"experiment", std::string(to_string(cfg.experiment))},
                    {"samples", cfg.samples},
                    {"seed", cfg.seed},
                    {"metrics", std::move(metrics)}};
  // Headline numbers for the primary metric.
  if (!plan.metrics.empty()) {
    const auto& primary = result.summary["metrics"][plan.metrics.front().name];
    for (const char* key : {"max", "mean"})
      if (primary.contains(key)) result.summary[key] = primary.at(key);
  }
  for (auto& [k, v] : plan.extra.items()) result.summary[k] = v;
  result.summary["pass"] = pass;
  result.pass = pass;
  return result;
}

unsigned thread_count_from_env() {
  if (const char* env = std::getenv("GENFUN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::filesystem::path summary_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".summary.json");
  return p;
}

int run_and_write(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.output.empty()) throw Error(ErrorCode::ConfigInvalid, "field 'output': missing");
  const RunResult result = run_experiment(cfg, threads);
  if (cfg.output.has_parent_path()) std::filesystem::create_directories(cfg.output.parent_path());
  {
    std::ofstream csv(cfg.output, std::ios::binary);
    if (!csv) throw Error(ErrorCode::InvalidArgument, "cannot write '" + cfg.output.string() + "'");
    write_csv(csv, result.rows);
  }
  {
    std::ofstream js(summary_path(cfg.output), std::ios::binary);
    if (!js) throw Error(ErrorCode::InvalidArgument, "cannot write summary next to '" + cfg.output.string() + "'");
    js << result.summary.dump(2) << '\n';
  }
  return result.pass ? 0 : 2;
}

}  // namespace genfun::cli

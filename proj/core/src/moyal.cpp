#include "genfun/moyal.hpp"

#include <cmath>
#include <numbers>

namespace genfun {

std::complex<double> kernel(const SymplecticStructure& space, const MidpointTriple& m, PlanckParameter hbar) {
  const double phase = kAreaOrientation * triangle_area(space, vertices_from_midpoints(m)) / hbar.hbar;
  return std::polar(1.0, phase);
}

ComplexRational ComplexRational::from_double(double r, double i) {
  if (!std::isfinite(r) || !std::isfinite(i))
    throw Error(ErrorCode::NonFiniteValue, "symbol coefficients must be finite");
  return ComplexRational(Rational(r), Rational(i));
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
  return ComplexRational(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

PolynomialSymbol::PolynomialSymbol(int dim) : dim_(dim) {
  if (dim < 2 || dim % 2 != 0) throw Error(ErrorCode::InvalidArgument, "symbol dimension must be even and >= 2");
}

PolynomialSymbol PolynomialSymbol::constant(int dim, ComplexRational c) {
  PolynomialSymbol s(dim);
  s.add_term(std::vector<int>(static_cast<std::size_t>(dim), 0), c);
  return s;
}

PolynomialSymbol PolynomialSymbol::coordinate(int dim, int index) {
  PolynomialSymbol s(dim);
  if (index < 0 || index >= dim) throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(index)] = 1;
  s.add_term(std::move(e), ComplexRational(1));
  return s;
}

void PolynomialSymbol::add_term(std::vector<int> exponent, const ComplexRational& coef, int hbar_power) {
  if (static_cast<int>(exponent.size()) != dim_)
    throw Error(ErrorCode::DimensionMismatch, "exponent length differs from symbol dimension");
  for (int e : exponent) {
    if (e < 0) throw Error(ErrorCode::InvalidArgument, "exponents must be nonnegative");
  }
  if (hbar_power < 0) throw Error(ErrorCode::InvalidArgument, "hbar power must be nonnegative");
  if (coef.is_zero()) return;
  SymbolKey key{hbar_power, std::move(exponent)};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), coef);
    return;
  }
  it->second += coef;
  if (it->second.is_zero()) terms_.erase(it);
}

int PolynomialSymbol::degree() const {
  int deg = -1;
  for (const auto& [key, c] : terms_) {
    int total = 0;
    for (int e : key.exponent) total += e;
    deg = std::max(deg, total);
  }
  return deg;
}

PolynomialSymbol PolynomialSymbol::derivative(int var, int k) const {
  if (var < 0 || var >= dim_) throw Error(ErrorCode::InvalidArgument, "derivative variable out of range");
  PolynomialSymbol out(dim_);
  const auto v = static_cast<std::size_t>(var);
  for (const auto& [key, c] : terms_) {
    if (key.exponent[v] < k) continue;
    Rational factor = 1;
    for (int i = 0; i < k; ++i) factor *= key.exponent[v] - i;
    std::vector<int> e = key.exponent;
    e[v] -= k;
    out.add_term(std::move(e), c * ComplexRational(factor), key.hbar_power);
  }
  return out;
}

PolynomialSymbol& PolynomialSymbol::operator+=(const PolynomialSymbol& o) {
  if (o.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "symbols differ in dimension");
  for (const auto& [key, c] : o.terms_) add_term(key.exponent, c, key.hbar_power);
  return *this;
}

PolynomialSymbol& PolynomialSymbol::operator-=(const PolynomialSymbol& o) {
  if (o.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "symbols differ in dimension");
  for (const auto& [key, c] : o.terms_) add_term(key.exponent, ComplexRational(-c.re, -c.im), key.hbar_power);
  return *this;
}

PolynomialSymbol operator*(const PolynomialSymbol& a, const PolynomialSymbol& b) {
  if (a.dim_ != b.dim_) throw Error(ErrorCode::DimensionMismatch, "symbols differ in dimension");
  PolynomialSymbol out(a.dim_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      std::vector<int> e(ka.exponent.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ka.exponent[i] + kb.exponent[i];
      out.add_term(std::move(e), ca * cb, ka.hbar_power + kb.hbar_power);
    }
  }
  return out;
}

PolynomialSymbol PolynomialSymbol::scaled(const ComplexRational& c, int hbar_power) const {
  PolynomialSymbol out(dim_);
  for (const auto& [key, coef] : terms_) out.add_term(key.exponent, coef * c, key.hbar_power + hbar_power);
  return out;
}

PolynomialSymbol PolynomialSymbol::hbar_coefficient(int power) const {
  PolynomialSymbol out(dim_);
  for (const auto& [key, c] : terms_) {
    if (key.hbar_power == power) out.add_term(key.exponent, c);
  }
  return out;
}

std::map<std::vector<int>, std::complex<double>> PolynomialSymbol::at(PlanckParameter hbar) const {
  std::map<std::vector<int>, std::complex<double>> out;
  for (const auto& [key, c] : terms_) out[key.exponent] += c.to_complex() * std::pow(hbar.hbar, key.hbar_power);
  return out;
}

PolynomialSymbol poisson_bracket(const PolynomialSymbol& f, const PolynomialSymbol& g) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "symbols differ in dimension");
  const int n = f.dim() / 2;
  PolynomialSymbol out(f.dim());
  for (int i = 0; i < n; ++i) {
    out += f.derivative(i) * g.derivative(n + i);
    out -= f.derivative(n + i) * g.derivative(i);
  }
  return out;
}

namespace {

// Pi^k / k! expands over multi-indices alpha = (a, b) in N^{2n} with |alpha| = k as
//   sum (-1)^{|b|} / alpha! (d_q^a d_p^b f)(d_p^a d_q^b g).
struct StarExpansion {
  const PolynomialSymbol& f;
  const PolynomialSymbol& g;
  int n;
  int order;
  PolynomialSymbol result;

  void recurse(int slot, int used, PolynomialSymbol df, PolynomialSymbol dg, Rational weight, int sign_count) {
    if (df.is_zero() || dg.is_zero()) return;
    if (slot == 2 * n) {
      // (i/2)^k with k = used.
      static const ComplexRational half_i(Rational(0), Rational(1, 2));
      ComplexRational factor(weight * (sign_count % 2 == 0 ? 1 : -1));
      for (int k = 0; k < used; ++k) factor = factor * half_i;
      result += (df * dg).scaled(factor, used);
      return;
    }
    // Slot i < n pairs d_{q_i} on f with d_{p_i} on g; slot n + i pairs d_{p_i} on f with d_{q_i} on g.
    const int i = slot % n;
    const bool q_on_f = slot < n;
    const int f_var = q_on_f ? i : n + i;
    const int g_var = q_on_f ? n + i : i;
    Rational inv_factorial = 1;
    for (int m = 0; used + m <= order; ++m) {
      if (m > 0) inv_factorial /= m;
      recurse(slot + 1, used + m, df.derivative(f_var, m), dg.derivative(g_var, m), weight * inv_factorial,
              sign_count + (q_on_f ? 0 : m));
      if (df.derivative(f_var, m).is_zero()) break;
    }
  }
};

}  // namespace

PolynomialSymbol star_product_poly(const PolynomialSymbol& f, const PolynomialSymbol& g, int order) {
  if (f.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "symbols differ in dimension");
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "star product order must be >= 0");
  StarExpansion ex{f, g, f.dim() / 2, order, PolynomialSymbol(f.dim())};
  ex.recurse(0, 0, f, g, Rational(1), 0);
  return ex.result;
}

PolynomialSymbol star_product_poly(const PolynomialSymbol& f, const PolynomialSymbol& g) {
  return star_product_poly(f, g, std::max(0, std::min(f.degree(), g.degree())));
}

GaussianProduct gaussian_phase_product(const SymplecticStructure& space, const Matrix& s1, const Matrix& s2,
                                       const PhasePoint& x, PlanckParameter hbar) {
  const int d = space.dim();
  space.check_dim(x, "x");
  if (s1.rows() != d || s1.cols() != d || s2.rows() != d || s2.cols() != d)
    throw Error(ErrorCode::DimensionMismatch, "quadratic forms have the wrong size");
  const Matrix& omega = space.form();
  const double s = kAreaOrientation;

  // Phase = 1/2 z^T M z + j^T z in z = (x1, x2); the area contributes
  // 2 s [x1^T Omega x + x^T Omega x2 + x2^T Omega x1].
  Matrix m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = 0.5 * (s1 + s1.transpose());
  m.bottomRightCorner(d, d) = 0.5 * (s2 + s2.transpose());
  m.topRightCorner(d, d) = 2.0 * s * omega.transpose();
  m.bottomLeftCorner(d, d) = 2.0 * s * omega;
  Vector j(2 * d);
  j.head(d) = 2.0 * s * omega * x;
  j.tail(d) = 2.0 * s * omega.transpose() * x;

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const Vector& lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (!(lambda.cwiseAbs().minCoeff() > 1e-12 * scale))
    throw Error(ErrorCode::DegeneratePhase, "Hessian of the phase in (x1, x2) is singular");

  const Vector z = eig.eigenvectors() * (eig.eigenvectors().transpose() * j).cwiseQuotient(lambda);
  GaussianProduct out;
  out.phase = -0.5 * j.dot(z);

  double log_det = 0.0;
  int signature = 0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    log_det += std::log(std::abs(lambda[k]));
    signature += lambda[k] > 0 ? 1 : -1;
  }
  const double dims = static_cast<double>(2 * d);
  out.log_amplitude = {0.5 * dims * std::log(2.0 * std::numbers::pi * hbar.hbar) - 0.5 * log_det,
                       std::numbers::pi * signature / 4.0};
  return out;
}

void to_json(nlohmann::json& j, const PolynomialSymbol& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [key, c] : s.terms()) {
    nlohmann::json t = {{"exp", key.exponent}, {"re", c.re.convert_to<double>()}, {"im", c.im.convert_to<double>()}};
    if (key.hbar_power != 0) t["hbar"] = key.hbar_power;
    terms.push_back(std::move(t));
  }
  j = {{"terms", std::move(terms)}};
}

PolynomialSymbol symbol_from_json(const nlohmann::json& j) {
  const auto bad = [](const std::string& field, const std::string& why) {
    return Error(ErrorCode::ConfigInvalid, "field '" + field + "': " + why);
  };
  if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array()) throw bad("terms", "missing or not an array");
  const auto& terms = j.at("terms");
  if (terms.empty()) throw bad("terms", "cannot infer dimension of an empty symbol");
  std::optional<PolynomialSymbol> out;
  for (const auto& t : terms) {
    if (!t.is_object() || !t.contains("exp") || !t.at("exp").is_array()) throw bad("exp", "missing or not an array");
    std::vector<int> e;
    for (const auto& k : t.at("exp")) {
      if (!k.is_number_integer()) throw bad("exp", "expected integers");
      e.push_back(k.get<int>());
    }
    const auto num = [&](const char* key) {
      if (!t.contains(key)) return 0.0;
      if (!t.at(key).is_number()) throw bad(key, "expected a number");
      return t.at(key).get<double>();
    };
    int hbar_power = 0;
    if (t.contains("hbar")) {
      if (!t.at("hbar").is_number_integer()) throw bad("hbar", "expected an integer");
      hbar_power = t.at("hbar").get<int>();
    }
    if (!out) {
      try {
        out.emplace(static_cast<int>(e.size()));
      } catch (const Error& err) {
        throw bad("exp", err.what());
      }
    }
    try {
      out->add_term(std::move(e), ComplexRational::from_double(num("re"), num("im")), hbar_power);
    } catch (const Error& err) {
      throw bad("exp", err.what());
    }
  }
  return *out;
}

}  // namespace genfun

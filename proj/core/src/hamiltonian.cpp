#include "genfun/hamiltonian.hpp"

#include <cmath>
#include <string>

namespace genfun {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// x^k and its first two derivatives, exact for integer k >= 0.
double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double monomial_value(const Monomial& m, const Vector& x) {
  double v = m.coef;
  for (std::size_t i = 0; i < m.exponent.size(); ++i) v *= ipow(x[static_cast<Eigen::Index>(i)], m.exponent[i]);
  return v;
}

// d/dx_i and d^2/dx_i dx_j of one monomial, evaluated by differentiating the exponents.
double monomial_derivative(const Monomial& m, const Vector& x, int i, int j = -1) {
  double v = m.coef;
  std::vector<int> e = m.exponent;
  for (int k : {i, j}) {
    if (k < 0) continue;
    if (e[static_cast<std::size_t>(k)] == 0) return 0.0;
    v *= e[static_cast<std::size_t>(k)];
    --e[static_cast<std::size_t>(k)];
  }
  for (std::size_t k = 0; k < e.size(); ++k) v *= ipow(x[static_cast<Eigen::Index>(k)], e[k]);
  return v;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::zero(int dim) {
  if (dim < 2 || dim % 2 != 0) throw Error(ErrorCode::InvalidArgument, "dimension must be even and >= 2");
  return quadratic(Matrix::Zero(dim, dim));
}

HamiltonianSpec HamiltonianSpec::quadratic(Matrix s, Vector b, double c) {
  if (s.rows() != s.cols() || s.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "quadratic: S must be square and match b");
  if (s.rows() == 0 || s.rows() % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "quadratic: dimension must be even and >= 2");
  if (max_abs(s - s.transpose()) > 1e-12 * (1.0 + max_abs(s)))
    throw Error(ErrorCode::InvalidArgument, "quadratic: S must be symmetric");
  const int dim = static_cast<int>(s.rows());
  Matrix sym = 0.5 * (s + s.transpose());
  return HamiltonianSpec(QuadraticHamiltonian{std::move(sym), std::move(b), c}, dim, 1.0);
}

HamiltonianSpec HamiltonianSpec::quadratic(Matrix s) {
  const auto n = s.rows();
  return quadratic(std::move(s), Vector::Zero(n), 0.0);
}

HamiltonianSpec HamiltonianSpec::polynomial(std::vector<Monomial> terms, int dim) {
  if (dim < 2 || dim % 2 != 0) throw Error(ErrorCode::InvalidArgument, "polynomial: dimension must be even");
  for (const auto& t : terms) {
    if (static_cast<int>(t.exponent.size()) != dim)
      throw Error(ErrorCode::DimensionMismatch, "polynomial: exponent length differs from dimension");
    for (int e : t.exponent) {
      if (e < 0) throw Error(ErrorCode::InvalidArgument, "polynomial: exponents must be nonnegative");
    }
  }
  return HamiltonianSpec(PolynomialHamiltonian{std::move(terms)}, dim, 1.0);
}

HamiltonianSpec HamiltonianSpec::builtin(const std::string& name) {
  if (name == "pendulum") return HamiltonianSpec(BuiltinHamiltonian{name}, 2, 1.0);
  throw Error(ErrorCode::InvalidArgument, "unknown builtin Hamiltonian '" + name + "'");
}

HamiltonianSpec HamiltonianSpec::scaled(double factor) const {
  HamiltonianSpec copy = *this;
  copy.scale_ *= factor;
  return copy;
}

void HamiltonianSpec::check(const Vector& x) const {
  if (x.size() != dim_)
    throw Error(ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) + ", Hamiltonian expects " + std::to_string(dim_));
}

double HamiltonianSpec::value(const Vector& x) const {
  check(x);
  const double v = std::visit(
      overloaded{
          [&](const QuadraticHamiltonian& h) { return 0.5 * x.dot(h.s * x) + h.b.dot(x) + h.c; },
          [&](const PolynomialHamiltonian& h) {
            double sum = 0.0;
            for (const auto& m : h.terms) sum += monomial_value(m, x);
            return sum;
          },
          [&](const BuiltinHamiltonian&) { return 0.5 * x[1] * x[1] - std::cos(x[0]); },
      },
      variant_);
  return scale_ * v;
}

Vector HamiltonianSpec::gradient(const Vector& x) const {
  check(x);
  Vector g = std::visit(
      overloaded{
          [&](const QuadraticHamiltonian& h) -> Vector { return h.s * x + h.b; },
          [&](const PolynomialHamiltonian& h) -> Vector {
            Vector out = Vector::Zero(dim_);
            for (const auto& m : h.terms)
              for (int i = 0; i < dim_; ++i) out[i] += monomial_derivative(m, x, i);
            return out;
          },
          [&](const BuiltinHamiltonian&) -> Vector {
            Vector out(2);
            out << std::sin(x[0]), x[1];
            return out;
          },
      },
      variant_);
  return scale_ * g;
}

Matrix HamiltonianSpec::hessian(const Vector& x) const {
  check(x);
  Matrix h = std::visit(
      overloaded{
          [&](const QuadraticHamiltonian& q) -> Matrix { return q.s; },
          [&](const PolynomialHamiltonian& p) -> Matrix {
            Matrix out = Matrix::Zero(dim_, dim_);
            for (const auto& m : p.terms)
              for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j) out(i, j) += monomial_derivative(m, x, i, j);
            return out;
          },
          [&](const BuiltinHamiltonian&) -> Matrix {
            Matrix out = Matrix::Zero(2, 2);
            out(0, 0) = std::cos(x[0]);
            out(1, 1) = 1.0;
            return out;
          },
      },
      variant_);
  return scale_ * h;
}

HamiltonianField field_of(const HamiltonianSpec& h) {
  return HamiltonianField{
      h.dim(),
      [h](const Vector& x) { return h.value(x); },
      [h](const Vector& x) { return h.gradient(x); },
      [h](const Vector& x) { return h.hessian(x); },
  };
}

HamiltonianField translated(const HamiltonianField& h, const Vector& shift) {
  HamiltonianField out{h.dim, {}, {}, {}};
  if (h.value) out.value = [f = h.value, shift](const Vector& x) { return f(x - shift); };
  out.gradient = [g = h.gradient, shift](const Vector& x) { return g(x - shift); };
  if (h.hessian) out.hessian = [d = h.hessian, shift](const Vector& x) { return d(x - shift); };
  return out;
}

Vector hamiltonian_displacement(const SymplecticStructure& space, const HamiltonianSpec& h,
                                const PhasePoint& x) {
  return space.sharp(h.gradient(x));
}

Vector hamiltonian_displacement(const SymplecticStructure& space, const HamiltonianField& h,
                                const PhasePoint& x) {
  return space.sharp(h.gradient(x));
}

void to_json(nlohmann::json& j, const HamiltonianSpec& h) {
  std::visit(overloaded{
                 [&](const QuadraticHamiltonian& q) {
                   nlohmann::json s = nlohmann::json::array();
                   for (Eigen::Index r = 0; r < q.s.rows(); ++r) {
                     nlohmann::json row = nlohmann::json::array();
                     for (Eigen::Index c = 0; c < q.s.cols(); ++c) row.push_back(q.s(r, c));
                     s.push_back(std::move(row));
                   }
                   j = {{"type", "quadratic"},
                        {"S", std::move(s)},
                        {"b", std::vector<double>(q.b.data(), q.b.data() + q.b.size())},
                        {"c", q.c}};
                 },
                 [&](const PolynomialHamiltonian& p) {
                   nlohmann::json terms = nlohmann::json::array();
                   for (const auto& m : p.terms) terms.push_back({{"exp", m.exponent}, {"coef", m.coef}});
                   j = {{"type", "polynomial"}, {"terms", std::move(terms)}};
                 },
                 [&](const BuiltinHamiltonian& b) { j = {{"type", "builtin"}, {"name", b.name}}; },
             },
             h.variant());
  if (h.scale() != 1.0) j["scale"] = h.scale();
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, "field '" + field + "': " + why);
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(key, "missing");
  return j.at(key);
}

double number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

}  // namespace

HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j, std::optional<int> dim_hint) {
  const auto& type_node = require(j, "type");
  if (!type_node.is_string()) bad("type", "expected a string");
  const auto type = type_node.get<std::string>();

  HamiltonianSpec spec = [&] {
    if (type == "quadratic") {
      const auto& s_node = require(j, "S");
      if (!s_node.is_array() || s_node.empty()) bad("S", "expected a non-empty array of rows");
      const auto n = static_cast<Eigen::Index>(s_node.size());
      Matrix s(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = s_node[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad("S", "expected a square matrix");
        for (Eigen::Index c = 0; c < n; ++c) s(r, c) = number(row[static_cast<std::size_t>(c)], "S");
      }
      Vector b = Vector::Zero(n);
      if (j.contains("b")) {
        const auto& b_node = j.at("b");
        if (!b_node.is_array() || static_cast<Eigen::Index>(b_node.size()) != n) bad("b", "expected a vector matching S");
        for (Eigen::Index i = 0; i < n; ++i) b[i] = number(b_node[static_cast<std::size_t>(i)], "b");
      }
      const double c = j.contains("c") ? number(j.at("c"), "c") : 0.0;
      try {
        return HamiltonianSpec::quadratic(std::move(s), std::move(b), c);
      } catch (const Error& e) {
        bad("S", e.what());
      }
    }
    if (type == "polynomial") {
      const auto& terms_node = require(j, "terms");
      if (!terms_node.is_array()) bad("terms", "expected an array");
      std::vector<Monomial> terms;
      int dim = dim_hint.value_or(0);
      for (const auto& t : terms_node) {
        const auto& e = require(t, "exp");
        if (!e.is_array()) bad("exp", "expected an array of integers");
        Monomial m;
        for (const auto& k : e) {
          if (!k.is_number_integer()) bad("exp", "expected integers");
          m.exponent.push_back(k.get<int>());
        }
        m.coef = number(require(t, "coef"), "coef");
        if (dim == 0) dim = static_cast<int>(m.exponent.size());
        terms.push_back(std::move(m));
      }
      if (dim == 0) bad("terms", "cannot infer dimension of an empty polynomial");
      try {
        return HamiltonianSpec::polynomial(std::move(terms), dim);
      } catch (const Error& e) {
        bad("terms", e.what());
      }
    }
    if (type == "builtin") {
      const auto& name = require(j, "name");
      if (!name.is_string()) bad("name", "expected a string");
      try {
        return HamiltonianSpec::builtin(name.get<std::string>());
      } catch (const Error& e) {
        bad("name", e.what());
      }
    }
    bad("type", "unknown Hamiltonian type '" + type + "'");
  }();

  if (j.contains("scale")) spec = spec.scaled(number(j.at("scale"), "scale"));
  return spec;
}

}  // namespace genfun

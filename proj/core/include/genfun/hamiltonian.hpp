#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "genfun/affine.hpp"

namespace genfun {

/// H(x) = 1/2 x^T S x + b^T x + c.
struct QuadraticHamiltonian {
  Matrix s;
  Vector b;
  double c = 0.0;
};

struct Monomial {
  std::vector<int> exponent;
  double coef = 0.0;
};

/// Sum of monomials in the phase-space coordinates.
struct PolynomialHamiltonian {
  std::vector<Monomial> terms;
};

/// Named closed-form Hamiltonian. Only "pendulum" (H = p^2/2 - cos q, 2-dim) exists.
struct BuiltinHamiltonian {
  std::string name;
};

/// Generating function on the affine space. Values, gradients and Hessians are analytic.
class HamiltonianSpec {
 public:
  using Variant = std::variant<QuadraticHamiltonian, PolynomialHamiltonian, BuiltinHamiltonian>;

  static HamiltonianSpec zero(int dim);
  static HamiltonianSpec quadratic(Matrix s, Vector b, double c = 0.0);
  static HamiltonianSpec quadratic(Matrix s);
  static HamiltonianSpec polynomial(std::vector<Monomial> terms, int dim);
  static HamiltonianSpec builtin(const std::string& name);

  /// Same function multiplied by `factor`.
  HamiltonianSpec scaled(double factor) const;

  /// Phase-space dimension the spec is defined on.
  int dim() const noexcept { return dim_; }
  double scale() const noexcept { return scale_; }
  const Variant& variant() const noexcept { return variant_; }
  bool is_quadratic() const noexcept { return std::holds_alternative<QuadraticHamiltonian>(variant_); }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

 private:
  HamiltonianSpec(Variant v, int dim, double scale) : variant_(std::move(v)), dim_(dim), scale_(scale) {}
  void check(const Vector& x) const;

  Variant variant_;
  int dim_ = 0;
  double scale_ = 1.0;
};

inline double eval_h(const HamiltonianSpec& h, const Vector& x) { return h.value(x); }
inline Vector grad_h(const HamiltonianSpec& h, const Vector& x) { return h.gradient(x); }
inline Matrix hess_h(const HamiltonianSpec& h, const Vector& x) { return h.hessian(x); }

/// Type-erased generating function: whatever the midpoint machinery needs.
/// `hessian` may be empty, in which case Jacobians fall back to central differences.
struct HamiltonianField {
  int dim = 0;
  std::function<double(const Vector&)> value;
  VectorMap gradient;
  JacobianMap hessian;
};

HamiltonianField field_of(const HamiltonianSpec& h);

/// x -> H(x - shift): the generating function conjugated by a translation.
HamiltonianField translated(const HamiltonianField& h, const Vector& shift);

/// The vector u_x with d_xH = u_x -| omega. Equals (dH/dp, -dH/dq) for the standard form.
Vector hamiltonian_displacement(const SymplecticStructure& space, const HamiltonianSpec& h,
                                const PhasePoint& x);
Vector hamiltonian_displacement(const SymplecticStructure& space, const HamiltonianField& h,
                                const PhasePoint& x);

// JSON: {"type":"quadratic","S":[[..]],"b":[..],"c":0.0}
//     | {"type":"polynomial","terms":[{"exp":[3,0],"coef":1.0}]}
//     | {"type":"builtin","name":"pendulum"}
// An optional "scale" multiplies the whole function. `dim_hint` fixes the
// dimension of a polynomial whose terms are empty.
void to_json(nlohmann::json& j, const HamiltonianSpec& h);
HamiltonianSpec hamiltonian_from_json(const nlohmann::json& j, std::optional<int> dim_hint = {});

}  // namespace genfun

#pragma once

// Moyal-product side of the composition rule: the triangle-area kernel, the
// exact Gaussian stationary-phase product of two quadratic generating
// functions, and the formal star product on polynomial symbols.

#include <complex>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "genfun/composition.hpp"

namespace genfun {

struct PlanckParameter {
  double hbar;

  explicit PlanckParameter(double h) : hbar(h) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  }
};

/// exp(i * kAreaOrientation * area(vertices_from_midpoints(x1, x2, x)) / hbar).
std::complex<double> kernel(const SymplecticStructure& space, const MidpointTriple& m, PlanckParameter hbar);

using Rational = boost::multiprecision::cpp_rational;

struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  /// Exact: every finite double is a dyadic rational.
  static ComplexRational from_double(double r, double i = 0.0);

  bool is_zero() const { return re == 0 && im == 0; }
  std::complex<double> to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b);
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) { return a.re == b.re && a.im == b.im; }
};

/// Monomial index: power of the formal parameter hbar, then exponents over (q_1..q_n, p_1..p_n).
struct SymbolKey {
  int hbar_power = 0;
  std::vector<int> exponent;

  friend auto operator<=>(const SymbolKey&, const SymbolKey&) = default;
};

/// Polynomial in phase-space coordinates whose coefficients are complex
/// rationals, polynomial in a formal hbar. Kept canonical: no zero terms.
class PolynomialSymbol {
 public:
  explicit PolynomialSymbol(int dim);

  static PolynomialSymbol constant(int dim, ComplexRational c);
  /// The coordinate function x_index.
  static PolynomialSymbol coordinate(int dim, int index);

  int dim() const noexcept { return dim_; }
  const std::map<SymbolKey, ComplexRational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(std::vector<int> exponent, const ComplexRational& coef, int hbar_power = 0);

  /// Largest total degree in the coordinates (-1 for the zero symbol).
  int degree() const;

  /// d^k / dx_var^k.
  PolynomialSymbol derivative(int var, int k = 1) const;

  PolynomialSymbol& operator+=(const PolynomialSymbol& o);
  PolynomialSymbol& operator-=(const PolynomialSymbol& o);
  friend PolynomialSymbol operator+(PolynomialSymbol a, const PolynomialSymbol& b) { return a += b; }
  friend PolynomialSymbol operator-(PolynomialSymbol a, const PolynomialSymbol& b) { return a -= b; }
  /// Pointwise (commutative) product.
  friend PolynomialSymbol operator*(const PolynomialSymbol& a, const PolynomialSymbol& b);
  /// Multiply by c * hbar^hbar_power.
  PolynomialSymbol scaled(const ComplexRational& c, int hbar_power = 0) const;

  friend bool operator==(const PolynomialSymbol& a, const PolynomialSymbol& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Terms whose hbar power equals `power`, with that power stripped.
  PolynomialSymbol hbar_coefficient(int power) const;

  /// Coefficients with hbar set to a number, keyed by coordinate exponent.
  std::map<std::vector<int>, std::complex<double>> at(PlanckParameter hbar) const;

 private:
  int dim_;
  std::map<SymbolKey, ComplexRational> terms_;
};

/// {f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i.
PolynomialSymbol poisson_bracket(const PolynomialSymbol& f, const PolynomialSymbol& g);

/// f * g = sum_{k <= order} (1/k!) (i hbar / 2)^k Pi^k(f, g), Pi the Poisson
/// bidifferential operator. Exact once order >= deg f + deg g.
PolynomialSymbol star_product_poly(const PolynomialSymbol& f, const PolynomialSymbol& g, int order);

/// Exact star product (order large enough that the series terminates).
PolynomialSymbol star_product_poly(const PolynomialSymbol& f, const PolynomialSymbol& g);

struct GaussianProduct {
  /// Stationary value of H1(x1) + H2(x2) + kAreaOrientation * area over (x1, x2).
  double phase = 0.0;
  /// log of the Gaussian prefactor: (d/2) log(2 pi hbar) - 1/2 log|det M| + i pi sig(M) / 4,
  /// M the Hessian of the phase in (x1, x2), d = 2 dim.
  std::complex<double> log_amplitude;
};

/// Exact evaluation of the integral of exp(i (H1(x1) + H2(x2) + kAreaOrientation * area) / hbar)
/// over (x1, x2) for centered quadratics H_k = 1/2 x^T S_k x. Throws DegeneratePhase.
GaussianProduct gaussian_phase_product(const SymplecticStructure& space, const Matrix& s1, const Matrix& s2,
                                       const PhasePoint& x, PlanckParameter hbar);

// JSON: {"terms":[{"exp":[1,1],"re":1.0,"im":0.0}]}, plus an optional integer
// "hbar" per term for the power of hbar. Coefficients are written as doubles.
void to_json(nlohmann::json& j, const PolynomialSymbol& s);
PolynomialSymbol symbol_from_json(const nlohmann::json& j);

}  // namespace genfun

#pragma once

#include <complex>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "psi_spectral/rational.hpp"

namespace psi_spectral {

/// Univariate polynomial with Gaussian-rational coefficients, lowest power first.
///
/// The coefficient vector is kept trimmed: the last stored coefficient is
/// nonzero, and the zero polynomial stores nothing.
class Poly {
 public:
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  Poly() = default;
  explicit Poly(std::vector<GaussianRational> coeffs);
  Poly(std::initializer_list<GaussianRational> coeffs)
      : Poly(std::vector<GaussianRational>(coeffs)) {}

  static Poly constant(GaussianRational c) { return Poly({std::move(c)}); }
  static Poly monomial(GaussianRational c, int power);
  static Poly x() { return Poly({0, 1}); }

  const std::vector<GaussianRational>& coeffs() const noexcept { return coeffs_; }
  /// Coefficient of x^power (zero beyond the stored range).
  GaussianRational coeff(int power) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree, or kZeroDegree for the zero polynomial.
  int degree() const noexcept { return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1; }
  const GaussianRational& leading() const { return coeffs_.back(); }

  bool is_real() const;
  Poly real_part() const;
  Poly imag_part() const;
  Poly monic() const;
  Poly derivative() const;

  GaussianRational eval(const GaussianRational& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  /// Largest |coefficient| as a double; 0 for the zero polynomial.
  double max_abs_coeff() const;

  std::string to_string() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const GaussianRational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const GaussianRational& c) { return a *= c; }
  friend Poly operator*(const GaussianRational& c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) = default;

 private:
  void trim();
  std::vector<GaussianRational> coeffs_;
};

/// Euclidean division: a = q*b + r with deg r < deg b. Throws on b = 0.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic greatest common divisor (zero only when both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);
/// Monic least common multiple.
Poly lcm(const Poly& a, const Poly& b);
Poly pow(const Poly& p, int e);

/// Double-precision copy of a Poly for fast repeated evaluation.
class NumericPoly {
 public:
  NumericPoly() = default;
  explicit NumericPoly(const Poly& p);
  std::complex<double> operator()(double x) const;
  std::complex<double> operator()(std::complex<double> x) const;
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

 private:
  std::vector<std::complex<double>> c_;
};

/// Quotient of polynomials kept in lowest terms with a monic denominator.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Poly::constant(1)) {}
  RationalFunction(Poly num) : num_(std::move(num)), den_(Poly::constant(1)) {}  // NOLINT
  RationalFunction(Poly num, Poly den);

  const Poly& num() const noexcept { return num_; }
  const Poly& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) = default;

 private:
  Poly num_;
  Poly den_;
};

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
};

/// Square-free decomposition p = c * prod_i f_i^i (Yun); returns (f_i, i) with f_i nonconstant.
std::vector<std::pair<Poly, int>> square_free_decomposition(const Poly& p);

/// Sturm chain of a real polynomial: p, p', -rem(...), ...
std::vector<Poly> sturm_sequence(const Poly& p);

/// Real roots of p in [a, b], ascending, refined by exact bisection until the
/// bracket is narrower than tol. For complex coefficients the real roots are
/// those of gcd(Re p, Im p).
std::vector<RealRoot> real_roots(const Poly& p, double a, double b, double tol = 1e-12);

/// Cauchy bound: every complex root satisfies |z| <= bound.
double root_bound(const Poly& p);

}  // namespace psi_spectral

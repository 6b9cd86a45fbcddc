#pragma once

#include <string>
#include <vector>

#include "psi_spectral/poly.hpp"

namespace psi_spectral {

/// P(x, d/dx) = sum_m p_m(x) (d/dx)^m with polynomial coefficients.
///
/// `lcm_den` records the l(x) that was multiplied through when the operator
/// came from rational coefficients (1 for native polynomial input).
class DiffOperator {
 public:
  /// coeffs[m] multiplies (d/dx)^m. The last entry must be nonzero, except for
  /// the zero operator (a single zero coefficient, or an empty list).
  explicit DiffOperator(std::vector<Poly> coeffs, Poly lcm_den = Poly::constant(1));

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Poly>& coeffs() const noexcept { return coeffs_; }
  const Poly& coeff(int m) const { return coeffs_.at(static_cast<std::size_t>(m)); }
  const Poly& leading() const { return coeffs_.back(); }
  const Poly& lcm_den() const noexcept { return lcm_den_; }
  bool is_zero() const;

  std::string to_string() const;

  friend bool operator==(const DiffOperator& a, const DiffOperator& b) = default;

 private:
  std::vector<Poly> coeffs_;
  Poly lcm_den_;
};

/// R(x, d/dx) = sum_m r_m(x) (d/dx)^m with rational-function coefficients.
class RationalDiffOperator {
 public:
  explicit RationalDiffOperator(std::vector<RationalFunction> coeffs);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<RationalFunction>& coeffs() const noexcept { return coeffs_; }

 private:
  std::vector<RationalFunction> coeffs_;
};

/// P = l*R - lambda*l*I where l is the monic lcm of the coefficient denominators.
DiffOperator clear_denominators(const RationalDiffOperator& r, const GaussianRational& lambda);

/// max_m (deg p_m - m) over nonzero coefficients; 0 for the zero operator.
int s0(const DiffOperator& p);

/// Real zeros of the leading coefficient in [a, b], ascending, with multiplicities.
std::vector<RealRoot> singular_points(const DiffOperator& p, double a, double b, double tol = 1e-12);

/// Every real zero of the leading coefficient.
std::vector<RealRoot> all_singular_points(const DiffOperator& p, double tol = 1e-12);

/// One nonzero term p_{m,j} x^j (d/dx)^m of the flattened operator.
struct MonomialTerm {
  int m = 0;
  int j = 0;
  GaussianRational coeff;
  friend bool operator==(const MonomialTerm&, const MonomialTerm&) = default;
};

/// Flattens P into monomial terms, ordered by m ascending then j descending.
std::vector<MonomialTerm> monomial_terms(const DiffOperator& p);

}  // namespace psi_spectral

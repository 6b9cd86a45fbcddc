#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "psi_spectral/diff_operator.hpp"
#include "psi_spectral/psi_combo.hpp"

namespace psi_spectral {

using ComplexCombo = BasicPsiCombo<Complex>;

/// f_N(x) = sum_n f_n e_n(x) with e_n = psi_{k0, n_dot(k0, n)} / sqrt(pi).
class ReconstructedFunction {
 public:
  /// Derivative series are built up to max_order (exact, via the basis recursion).
  ReconstructedFunction(int k0, std::vector<Complex> coeffs, int max_order = 4);

  int k0() const noexcept { return k0_; }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }

  Complex eval(double x) const;
  int max_order() const noexcept { return static_cast<int>(derivatives_.size()) - 1; }

  /// r-th derivative (level k0 + r); r = 0 is eval. Throws beyond max_order.
  Complex eval_derivative(int r, double x) const;
  const ComplexCombo& derivative_combo(int r) const;

  /// ||coeffs||_2, equal to the weighted norm by orthonormality.
  double l2_norm() const;
  /// sqrt(<f, f>_(k0)) by theta quadrature.
  double quadrature_norm(int nodes) const;

 private:
  int k0_;
  std::vector<Complex> coeffs_;
  std::vector<ComplexCombo> derivatives_;
};

struct ResidualSample {
  Complex value;
  bool near_singular = false;
};

/// sum_m p_m(x) f^(m)(x). Flags points within guard of a singular point.
ResidualSample residual(const DiffOperator& p, const ReconstructedFunction& f, double x,
                        const std::vector<RealRoot>& singular, double guard = 1e-6);
ResidualSample residual(const DiffOperator& p, const ReconstructedFunction& f, double x);

/// Largest |residual| over a grid, skipping flagged points.
double max_residual(const DiffOperator& p, const ReconstructedFunction& f, const std::vector<double>& grid,
                    double guard = 1e-6);

struct Alignment {
  std::vector<Complex> alpha;  // one scalar per basis function
  double max_abs_err = 0.0;
  double rel_l2_err = 0.0;
};

/// alpha = argmin ||f - alpha g|| on the grid; errors of f/alpha against g.
Alignment align_and_compare(const ReconstructedFunction& f, const std::function<Complex(double)>& g,
                            const std::vector<double>& grid);

/// Least-squares fit of g by the span of fs on the grid; errors of the fit against g.
Alignment align_subspace(const std::vector<ReconstructedFunction>& fs, const std::function<Complex(double)>& g,
                         const std::vector<double>& grid);

/// f_n = <g, e_n>_(k0) for n < n_terms by theta quadrature.
std::vector<Complex> project(const std::function<Complex(double)>& g, int k0, int n_terms, int nodes);

/// Uniform grid of count points on [a, b].
std::vector<double> uniform_grid(double a, double b, int count);

/// "n,n_dot,re,im" rows in %.17g.
void write_coefficient_csv(std::ostream& os, const ReconstructedFunction& f);
/// Inverse of write_coefficient_csv; rows must list n = 0, 1, ... in order.
std::vector<Complex> read_coefficient_csv(std::istream& is);
/// "x,re_f,im_f,re_residual,im_residual" rows in %.17g.
void write_sample_csv(std::ostream& os, const DiffOperator& p, const ReconstructedFunction& f,
                      const std::vector<double>& grid);

}  // namespace psi_spectral

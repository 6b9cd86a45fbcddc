#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psi_spectral/diff_operator.hpp"
#include "psi_spectral/psi_combo.hpp"

namespace psi_spectral {

/// Exact truncated matrix b_m^n = <P e_n, e'_m> between the level-k0 and
/// level-k_diamond unilateral bases. Rows are cut at n_cols - bandwidth so that
/// every retained row has its full band inside the stored columns.
class BandMatrix {
 public:
  struct Entry {
    int row = 0;
    GaussianRational value;
  };

  BandMatrix(int k0, int k_diamond, int order, int n_cols);

  int k0() const noexcept { return k0_; }
  int k_diamond() const noexcept { return k_diamond_; }
  int order() const noexcept { return order_; }
  int bandwidth() const noexcept { return bandwidth_; }
  int n_rows() const noexcept { return n_rows_; }
  int n_cols() const noexcept { return n_cols_; }

  /// Nonzero entries of column n, ascending by row.
  const std::vector<Entry>& column(int n) const { return columns_.at(static_cast<std::size_t>(n)); }
  std::vector<Entry>& column(int n) { return columns_.at(static_cast<std::size_t>(n)); }
  GaussianRational entry(int m, int n) const;
  std::size_t nonzero_count() const;

 private:
  int k0_;
  int k_diamond_;
  int order_;
  int bandwidth_;
  int n_rows_;
  int n_cols_;
  std::vector<std::vector<Entry>> columns_;
};

/// Largest admissible k_diamond for P at level k0.
inline int max_k_diamond(const DiffOperator& p, int k0) { return k0 - s0(p); }

/// Exact assembly, columns expanded in parallel.
BandMatrix assemble(const DiffOperator& p, int k0, int k_diamond, int n_cols);

/// N = -(i/2)((x^2+1) d/dx + (k+1) x), whose eigenfunctions at level k are psi_{k,r}
/// with eigenvalue r + (k+1)/2.
struct CharacteristicOperator {
  int k = 0;

  GaussianRational eigenvalue(int n_dot) const;
  /// N applied to a level-k combination, returned exactly at level k - 1.
  PsiCombo apply(const PsiCombo& c) const;
  /// Exact check of N psi_{k,r} = lambda_r psi_{k,r}.
  bool satisfies_eigen_equation(int n_dot) const;
};

struct ConditionsReport {
  bool c2_bandwidth_ok = true;
  double c21_sup_estimate = 0.0;
  double c22_min_ratio = 0.0;
  bool c22_eigen_equation_ok = true;
  double c23_envelope_const = 0.0;
};

/// Read-only audit. The eigen equation is checked exactly for every retained
/// row; the envelope ratio is sampled on x in [-10, 10].
ConditionsReport audit_conditions(const BandMatrix& b, const CharacteristicOperator& nop);

struct FloatMatrix {
  Eigen::MatrixXcd dense;
  /// (m, n) of entries whose rounding overflowed to infinity.
  std::vector<std::pair<int, int>> overflow;
};

/// Dense nRows x nCols double rendering, each part rounded to nearest.
FloatMatrix export_float(const BandMatrix& b);

/// Header lines then exact "m n re im" triplets.
void write_dump(std::ostream& os, const BandMatrix& b);
/// CSV "m,n,re,im" in %.17g.
void write_float_csv(std::ostream& os, const BandMatrix& b);

}  // namespace psi_spectral

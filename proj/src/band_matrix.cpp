#include "psi_spectral/band_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "psi_spectral/errors.hpp"
#include "psi_spectral/parallel.hpp"
#include "psi_spectral/psi_basis.hpp"

namespace psi_spectral {

BandMatrix::BandMatrix(int k0, int k_diamond, int order, int n_cols)
    : k0_(k0),
      k_diamond_(k_diamond),
      order_(order),
      bandwidth_(2 * order + k0 - k_diamond),
      n_rows_(n_cols - bandwidth_),
      n_cols_(n_cols),
      columns_(static_cast<std::size_t>(std::max(n_cols, 0))) {
  if (bandwidth_ < 0) throw PreconditionError("bandwidth 2M + k0 - k_diamond is negative");
  if (n_cols < bandwidth_ + 1)
    throw PreconditionError("truncation too small: need n_cols >= " + std::to_string(bandwidth_ + 1) +
                            ", got " + std::to_string(n_cols));
}

GaussianRational BandMatrix::entry(int m, int n) const {
  for (const auto& e : column(n))
    if (e.row == m) return e.value;
  return {};
}

std::size_t BandMatrix::nonzero_count() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c.size();
  return total;
}

BandMatrix assemble(const DiffOperator& p, int k0, int k_diamond, int n_cols) {
  const int bound = max_k_diamond(p, k0);
  if (k_diamond > bound)
    throw PreconditionError("assembly requires k_diamond <= k0 - s0 = " + std::to_string(bound) + ", got " +
                            std::to_string(k_diamond));
  BandMatrix b(k0, k_diamond, p.order(), n_cols);
  const int n_rows = b.n_rows();
  parallel_for(static_cast<std::size_t>(n_cols), [&](std::size_t col) {
    const int n = static_cast<int>(col);
    const PsiCombo combo = apply_operator(p, k0, bilateral_index(k0, n), k_diamond);
    auto& out = b.column(n);
    for (const auto& [r, c] : combo.terms()) {
      const int m = unilateral_index(k_diamond, r);
      if (m < n_rows) out.push_back({m, c});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.row < y.row; });
  });
  return b;
}

GaussianRational CharacteristicOperator::eigenvalue(int n_dot) const {
  return GaussianRational(Rational(2L * n_dot + k + 1, 2));
}

PsiCombo CharacteristicOperator::apply(const PsiCombo& c) const {
  if (c.is_zero()) return PsiCombo(k - 1);
  if (c.level() != k) throw PreconditionError("characteristic operator applied at the wrong level");
  // (x^2 + 1) f' at level k - 1: f' sits at k + 1, two lowerings each.
  const PsiCombo d = raise_diff(c);
  PsiCombo sum = lower_mult_x(lower_mult_x(d));
  sum += lower_identity(lower_identity(d));
  PsiCombo xf = lower_mult_x(c);
  xf *= GaussianRational(k + 1);
  sum += xf;
  sum *= GaussianRational(Rational(0), Rational(-1, 2));
  if (sum.is_zero()) return PsiCombo(k - 1);
  return sum;
}

bool CharacteristicOperator::satisfies_eigen_equation(int n_dot) const {
  const PsiCombo lhs = apply(PsiCombo::single(k, n_dot));
  PsiCombo rhs = lower_identity(PsiCombo::single(k, n_dot));
  rhs *= eigenvalue(n_dot);
  return lhs == rhs;
}

ConditionsReport audit_conditions(const BandMatrix& b, const CharacteristicOperator& nop) {
  ConditionsReport r;
  const int kd = b.k_diamond();
  const int order = b.order();

  bool first_ratio = true;
  for (int n = 0; n < b.n_cols(); ++n) {
    for (const auto& e : b.column(n)) {
      if (std::abs(e.row - n) > b.bandwidth() || e.value.is_zero()) r.c2_bandwidth_ok = false;
      if (n >= 1) {
        const double v = std::abs(e.value.to_complex()) / std::pow(static_cast<double>(n), order);
        r.c21_sup_estimate = std::max(r.c21_sup_estimate, v);
      }
    }
  }

  for (int m = 0; m < b.n_rows(); ++m) {
    const int r_dot = bilateral_index(kd, m);
    if (nop.k != kd || !nop.satisfies_eigen_equation(r_dot)) r.c22_eigen_equation_ok = false;
    if (m == 0) continue;
    const double ratio = std::abs(nop.eigenvalue(r_dot).re().to_double()) / m;
    r.c22_min_ratio = first_ratio ? ratio : std::min(r.c22_min_ratio, ratio);
    first_ratio = false;
  }

  const int probe = std::min(b.n_rows(), 64);
  for (int xi = -100; xi <= 100; ++xi) {
    const double x = 0.1 * xi;
    const double envelope = std::pow(x * x + 1.0, -(kd + 1) / 2.0) / std::sqrt(std::numbers::pi);
    for (int m = 0; m < probe; ++m) {
      const double v = std::abs(eval_psi({kd, bilateral_index(kd, m)}, x)) / std::sqrt(std::numbers::pi);
      r.c23_envelope_const = std::max(r.c23_envelope_const, v / envelope);
    }
  }
  return r;
}

FloatMatrix export_float(const BandMatrix& b) {
  FloatMatrix f;
  f.dense = Eigen::MatrixXcd::Zero(b.n_rows(), b.n_cols());
  for (int n = 0; n < b.n_cols(); ++n) {
    for (const auto& e : b.column(n)) {
      const Complex v = e.value.to_complex();
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) f.overflow.emplace_back(e.row, n);
      f.dense(e.row, n) = v;
    }
  }
  return f;
}

void write_dump(std::ostream& os, const BandMatrix& b) {
  os << "# band matrix b_m^n, exact\n"
     << "k0 " << b.k0() << '\n'
     << "k_diamond " << b.k_diamond() << '\n'
     << "order " << b.order() << '\n'
     << "bandwidth " << b.bandwidth() << '\n'
     << "rows " << b.n_rows() << '\n'
     << "cols " << b.n_cols() << '\n'
     << "nonzeros " << b.nonzero_count() << '\n';
  for (int n = 0; n < b.n_cols(); ++n)
    for (const auto& e : b.column(n))
      os << e.row << ' ' << n << ' ' << e.value.re().to_string() << ' ' << e.value.im().to_string() << '\n';
}

void write_float_csv(std::ostream& os, const BandMatrix& b) {
  os << "m,n,re,im\n";
  char buf[128];
  for (int n = 0; n < b.n_cols(); ++n) {
    for (const auto& e : b.column(n)) {
      const Complex v = e.value.to_complex();
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", e.row, n, v.real(), v.imag());
      os << buf;
    }
  }
}

}  // namespace psi_spectral

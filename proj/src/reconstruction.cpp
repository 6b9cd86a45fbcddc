#include "psi_spectral/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "psi_spectral/errors.hpp"
#include "psi_spectral/psi_basis.hpp"

namespace psi_spectral {

namespace {
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);
}

ReconstructedFunction::ReconstructedFunction(int k0, std::vector<Complex> coeffs, int max_order)
    : k0_(k0), coeffs_(std::move(coeffs)) {
  if (max_order < 0) throw PreconditionError("derivative order must be nonnegative");
  ComplexCombo c(k0_);
  for (std::size_t n = 0; n < coeffs_.size(); ++n)
    c.add(bilateral_index(k0_, static_cast<int>(n)), coeffs_[n] * kInvSqrtPi);
  derivatives_.push_back(std::move(c));
  for (int r = 1; r <= max_order; ++r) {
    ComplexCombo next = raise_diff(derivatives_.back());
    if (next.is_zero()) next = ComplexCombo(k0_ + r);
    derivatives_.push_back(std::move(next));
  }
}

const ComplexCombo& ReconstructedFunction::derivative_combo(int r) const {
  if (r < 0 || r > max_order())
    throw PreconditionError("derivative order " + std::to_string(r) + " outside [0, " +
                            std::to_string(max_order()) + "]");
  return derivatives_[static_cast<std::size_t>(r)];
}

Complex ReconstructedFunction::eval(double x) const { return derivatives_.front().eval(x); }

Complex ReconstructedFunction::eval_derivative(int r, double x) const { return derivative_combo(r).eval(x); }

double ReconstructedFunction::l2_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

double ReconstructedFunction::quadrature_norm(int nodes) const {
  const auto& q = theta_quadrature(nodes);
  std::vector<Complex> v(q.x().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eval(q.x()[i]);
  return std::sqrt(std::max(0.0, q.inner_product(k0_, v, v).real()));
}

ResidualSample residual(const DiffOperator& p, const ReconstructedFunction& f, double x,
                        const std::vector<RealRoot>& singular, double guard) {
  ResidualSample out;
  for (const auto& s : singular)
    if (std::abs(x - s.value) < guard) out.near_singular = true;
  for (int m = 0; m <= p.order(); ++m) {
    if (p.coeff(m).is_zero()) continue;
    out.value += NumericPoly(p.coeff(m))(x) * f.eval_derivative(m, x);
  }
  return out;
}

ResidualSample residual(const DiffOperator& p, const ReconstructedFunction& f, double x) {
  return residual(p, f, x, all_singular_points(p));
}

double max_residual(const DiffOperator& p, const ReconstructedFunction& f, const std::vector<double>& grid,
                    double guard) {
  const auto singular = all_singular_points(p);
  double worst = 0.0;
  for (double x : grid) {
    const ResidualSample r = residual(p, f, x, singular, guard);
    if (!r.near_singular) worst = std::max(worst, std::abs(r.value));
  }
  return worst;
}

Alignment align_and_compare(const ReconstructedFunction& f, const std::function<Complex(double)>& g,
                            const std::vector<double>& grid) {
  if (grid.empty()) throw PreconditionError("alignment grid is empty");
  std::vector<Complex> fv(grid.size()), gv(grid.size());
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fv[i] = f.eval(grid[i]);
    gv[i] = g(grid[i]);
    if (!std::isfinite(gv[i].real()) || !std::isfinite(gv[i].imag()))
      throw DomainError("reference is not finite on the grid");
    num += std::conj(gv[i]) * fv[i];
    den += std::norm(gv[i]);
  }
  if (!(den > 1e-300)) throw DomainError("reference vanishes on the grid; cannot align");
  const Complex alpha = num / den;
  if (std::abs(alpha) == 0.0) throw DomainError("reconstruction is orthogonal to the reference on the grid");

  Alignment a;
  a.alpha = {alpha};
  double err2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = std::abs(fv[i] / alpha - gv[i]);
    a.max_abs_err = std::max(a.max_abs_err, e);
    err2 += e * e;
  }
  a.rel_l2_err = std::sqrt(err2 / den);
  return a;
}

Alignment align_subspace(const std::vector<ReconstructedFunction>& fs, const std::function<Complex(double)>& g,
                         const std::vector<double>& grid) {
  if (grid.empty()) throw PreconditionError("alignment grid is empty");
  if (fs.empty()) throw PreconditionError("alignment needs at least one basis function");
  const auto rows = static_cast<Eigen::Index>(grid.size());
  const auto cols = static_cast<Eigen::Index>(fs.size());
  Eigen::MatrixXcd a(rows, cols);
  Eigen::VectorXcd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = grid[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = fs[static_cast<std::size_t>(j)].eval(x);
    rhs(i) = g(x);
  }
  const double den = rhs.squaredNorm();
  if (!(den > 1e-300)) throw DomainError("reference vanishes on the grid; cannot align");
  const Eigen::VectorXcd c = a.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXcd diff = a * c - rhs;

  Alignment out;
  out.alpha.assign(c.data(), c.data() + c.size());
  out.max_abs_err = diff.cwiseAbs().maxCoeff();
  out.rel_l2_err = std::sqrt(diff.squaredNorm() / den);
  return out;
}

std::vector<Complex> project(const std::function<Complex(double)>& g, int k0, int n_terms, int nodes) {
  const auto& q = theta_quadrature(nodes);
  std::vector<Complex> gv(q.x().size());
  for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = g(q.x()[i]);
  std::vector<Complex> out(static_cast<std::size_t>(std::max(n_terms, 0)));
  std::vector<Complex> ev(q.x().size());
  for (int n = 0; n < n_terms; ++n) {
    const BasisIndex idx{k0, bilateral_index(k0, n)};
    for (std::size_t i = 0; i < ev.size(); ++i) ev[i] = eval_psi(idx, q.x()[i]) * kInvSqrtPi;
    out[static_cast<std::size_t>(n)] = q.inner_product(k0, gv, ev);
  }
  return out;
}

std::vector<double> uniform_grid(double a, double b, int count) {
  if (count < 1) return {};
  if (count == 1) return {a};
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
  return g;
}

void write_coefficient_csv(std::ostream& os, const ReconstructedFunction& f) {
  os << "n,n_dot,re,im\n";
  char buf[128];
  for (std::size_t n = 0; n < f.coeffs().size(); ++n) {
    const int nd = bilateral_index(f.k0(), static_cast<int>(n));
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", n, nd, f.coeffs()[n].real(), f.coeffs()[n].imag());
    os << buf;
  }
}

std::vector<Complex> read_coefficient_csv(std::istream& is) {
  std::vector<Complex> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("n,", 0) == 0) continue;
    }
    std::istringstream ss(line);
    std::string field[4];
    for (auto& s : field)
      if (!std::getline(ss, s, ',')) throw SpecError("expected 4 comma-separated fields", line_no);
    try {
      std::size_t pos = 0;
      const long n = std::stol(field[0], &pos);
      if (pos != field[0].size() || n != static_cast<long>(out.size()))
        throw SpecError("coefficient rows must list n = 0, 1, ... in order", line_no);
      const double re = std::stod(field[2], &pos);
      if (pos != field[2].size()) throw SpecError("malformed real part", line_no);
      const double im = std::stod(field[3], &pos);
      if (pos != field[3].size()) throw SpecError("malformed imaginary part", line_no);
      out.emplace_back(re, im);
    } catch (const std::logic_error&) {
      throw SpecError("malformed number in coefficient row", line_no);
    }
  }
  return out;
}

void write_sample_csv(std::ostream& os, const DiffOperator& p, const ReconstructedFunction& f,
                      const std::vector<double>& grid) {
  const auto singular = all_singular_points(p);
  os << "x,re_f,im_f,re_residual,im_residual\n";
  char buf[160];
  for (double x : grid) {
    const Complex v = f.eval(x);
    const ResidualSample r = residual(p, f, x, singular);
    if (r.near_singular) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,nan,nan\n", x, v.real(), v.imag());
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, v.real(), v.imag(), r.value.real(),
                    r.value.imag());
    }
    os << buf;
  }
}

}  // namespace psi_spectral

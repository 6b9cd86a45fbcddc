#include "psi_spectral/nullspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "psi_spectral/errors.hpp"

namespace psi_spectral {

namespace {

Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& v) {
  if (v.cols() == 0) return v;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(v, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) throw SolverError("SVD failed while orthonormalising candidates");
  const auto& s = svd.singularValues();
  const double cut = s(0) * 1e-12 * static_cast<double>(std::max(v.rows(), v.cols()));
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

KernelCandidates nullspace(const Eigen::MatrixXcd& b, double sigma_rel_tol) {
  if (!(sigma_rel_tol > 0.0 && sigma_rel_tol < 1.0)) throw PreconditionError("sigma_rel_tol must lie in (0, 1)");
  const Eigen::Index rows = b.rows(), cols = b.cols();
  if (rows > cols) throw PreconditionError("nullspace expects rows <= cols");
  KernelCandidates out;
  if (cols == 0) return out;

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw SolverError("SVD did not converge");
  const auto& s = svd.singularValues();
  out.sigma_max = s.size() > 0 ? s(0) : 0.0;

  std::vector<double> sig(static_cast<std::size_t>(cols), 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i) sig[static_cast<std::size_t>(i)] = s(i);

  std::vector<Eigen::Index> picked;
  for (Eigen::Index i = cols; i-- > 0;) {
    const double si = sig[static_cast<std::size_t>(i)];
    if (out.sigma_max == 0.0 || si < sigma_rel_tol * out.sigma_max) picked.push_back(i);
  }
  out.vectors.resize(cols, static_cast<Eigen::Index>(picked.size()));
  for (std::size_t j = 0; j < picked.size(); ++j) {
    out.vectors.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(picked[j]);
    out.sigmas.push_back(sig[static_cast<std::size_t>(picked[j])]);
  }
  out.spectrum.assign(sig.rbegin(), sig.rend());
  return out;
}

TailFilterResult tail_filter(const Eigen::MatrixXcd& vectors, double tail_tol) {
  TailFilterResult out;
  const Eigen::Index n = vectors.rows();
  out.accepted.resize(n, 0);
  if (vectors.cols() == 0 || n == 0) return out;

  const Eigen::MatrixXcd q = orthonormal_basis(vectors);
  const Eigen::Index c = q.cols();
  if (c == 0) return out;
  const Eigen::Index tail = (n + 3) / 4;
  const Eigen::MatrixXcd t = q.bottomRows(tail);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(t, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw SolverError("SVD failed in tail filter");
  const Eigen::MatrixXcd rotated = q * svd.matrixV();
  const auto& s = svd.singularValues();

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = c; j-- > 0;) {
    const double sj = j < s.size() ? s(j) : 0.0;
    const double fraction = sj * sj;
    if (fraction <= tail_tol) {
      keep.push_back(j);
      out.accepted_fractions.push_back(fraction);
    } else {
      out.rejected_fractions.push_back(fraction);
    }
  }
  out.accepted.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.accepted.col(static_cast<Eigen::Index>(j)) = rotated.col(keep[j]);
  return out;
}

double max_principal_angle(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw PreconditionError("principal angles need bases of equal shape");
  if (a.cols() == 0) return 0.0;
  const Eigen::MatrixXcd residual = a - b * (b.adjoint() * a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(residual);
  const double s = std::min(1.0, svd.singularValues()(0));
  return std::asin(s);
}

void normalize_phases(Eigen::MatrixXcd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    const Complex pivot = vectors(arg, j);
    if (std::abs(pivot) == 0.0) continue;
    vectors.col(j) *= std::conj(pivot) / std::abs(pivot);
    vectors(arg, j) = std::abs(vectors(arg, j));
  }
}

double leading_block_min_sigma(const Eigen::MatrixXcd& b) {
  const Eigen::Index k = std::min(b.rows(), b.cols());
  if (k == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(b.topLeftCorner(k, k));
  if (svd.info() != Eigen::Success) throw SolverError("SVD did not converge");
  const auto& s = svd.singularValues();
  return s(0) == 0.0 ? 0.0 : s(k - 1) / s(0);
}

namespace {

struct RunOutput {
  TruncationRun info;
  TailFilterResult filtered;
  double residual = 0.0;
};

RunOutput run_truncation(const DiffOperator& p, int k0, int k_diamond, int n_cols, const NullspaceOptions& opt) {
  const BandMatrix b = assemble(p, k0, k_diamond, n_cols);
  const FloatMatrix f = export_float(b);
  if (!f.overflow.empty()) throw SolverError("matrix entries overflow double precision");
  const KernelCandidates cand = nullspace(f.dense, opt.sigma_rel_tol);

  RunOutput out;
  out.info.n_cols = b.n_cols();
  out.info.n_rows = b.n_rows();
  out.info.candidates = static_cast<int>(cand.vectors.cols());
  out.info.sigma_max = cand.sigma_max;
  // nonstructural sigmas: the spectrum minus the (cols - rows) forced zeros
  const std::size_t structural = static_cast<std::size_t>(b.n_cols() - b.n_rows());
  for (std::size_t i = structural; i < cand.spectrum.size() && out.info.smallest_sigmas.size() < 8; ++i)
    out.info.smallest_sigmas.push_back(cand.sigma_max > 0 ? cand.spectrum[i] / cand.sigma_max : 0.0);

  out.filtered = tail_filter(cand.vectors, opt.tail_tol);
  out.info.accepted = static_cast<int>(out.filtered.accepted.cols());
  for (Eigen::Index j = 0; j < out.filtered.accepted.cols(); ++j)
    out.residual = std::max(out.residual, (f.dense * out.filtered.accepted.col(j)).norm());
  return out;
}

}  // namespace

NullspaceResult solve(const DiffOperator& p, int k0, int k_diamond, int n, const NullspaceOptions& opt) {
  if (n < 1) throw PreconditionError("truncation must be positive");
  const RunOutput coarse = run_truncation(p, k0, k_diamond, n, opt);
  const RunOutput fine = run_truncation(p, k0, k_diamond, 2 * n, opt);

  NullspaceResult r;
  r.coarse = coarse.info;
  r.fine = fine.info;
  r.singular_values = fine.info.smallest_sigmas;
  r.residual_norm = fine.residual;

  const Eigen::Index d_coarse = coarse.filtered.accepted.cols();
  const Eigen::Index d_fine = fine.filtered.accepted.cols();
  std::ostringstream diag;
  if (d_coarse != d_fine) {
    r.converged = false;
    r.accepted_dimension = 0;
    diag << "dimension mismatch: " << d_coarse << " accepted at N=" << n << ", " << d_fine << " at N=" << 2 * n;
    r.diagnostics = diag.str();
    return r;
  }

  Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(fine.filtered.accepted.rows(), d_coarse);
  padded.topRows(coarse.filtered.accepted.rows()) = coarse.filtered.accepted;
  r.subspace_angle_to_previous_truncation = max_principal_angle(padded, fine.filtered.accepted);
  if (!(r.subspace_angle_to_previous_truncation < opt.angle_tol)) {
    r.converged = false;
    r.accepted_dimension = 0;
    diag << "principal angle " << r.subspace_angle_to_previous_truncation << " exceeds " << opt.angle_tol;
    r.diagnostics = diag.str();
    return r;
  }

  Eigen::MatrixXcd v = fine.filtered.accepted;
  normalize_phases(v);
  r.accepted_dimension = static_cast<int>(d_fine);
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    CoefficientVector cv;
    cv.k0 = k0;
    cv.values.assign(v.col(j).data(), v.col(j).data() + v.rows());
    const Eigen::Index tail = (v.rows() + 3) / 4;
    cv.tail_fraction = v.col(j).tail(tail).squaredNorm();
    r.vectors.push_back(std::move(cv));
  }
  return r;
}

}  // namespace psi_spectral

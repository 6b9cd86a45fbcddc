#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psi_spectral/band_matrix.hpp"
#include "psi_spectral/diff_operator.hpp"

namespace psi_spectral {

struct NullspaceOptions {
  double sigma_rel_tol = 1e-8;
  double tail_tol = 1e-4;
  double angle_tol = 1e-4;
};

/// Right singular vectors spanning the numerical kernel of a (rows <= cols) matrix.
/// Columns past the row count carry sigma = 0.
struct KernelCandidates {
  Eigen::MatrixXcd vectors;
  std::vector<double> sigmas;      // sigma of each candidate, ascending
  std::vector<double> spectrum;    // all cols singular values (structural zeros included), ascending
  double sigma_max = 0.0;
};

KernelCandidates nullspace(const Eigen::MatrixXcd& b, double sigma_rel_tol);

/// Accepted subspace after removing directions with tail energy above tol.
struct TailFilterResult {
  Eigen::MatrixXcd accepted;              // orthonormal columns
  std::vector<double> accepted_fractions; // tail energy fraction of each accepted column
  std::vector<double> rejected_fractions;
};

/// The tail is the last ceil(N/4) coefficients. The candidate span is rotated
/// so that tail energies are the squared singular values of its tail block.
TailFilterResult tail_filter(const Eigen::MatrixXcd& vectors, double tail_tol);

/// Largest principal angle (radians) between the column spans of two
/// orthonormal bases of equal dimension and equal row count.
double max_principal_angle(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Multiplies each column by a unit scalar so its largest entry is real positive.
void normalize_phases(Eigen::MatrixXcd& vectors);

/// Smallest singular value of the leading square block, relative to the largest.
double leading_block_min_sigma(const Eigen::MatrixXcd& b);

struct CoefficientVector {
  int k0 = 0;
  std::vector<Complex> values;
  double tail_fraction = 0.0;
};

struct TruncationRun {
  int n_cols = 0;
  int n_rows = 0;
  int candidates = 0;
  int accepted = 0;
  double sigma_max = 0.0;
  std::vector<double> smallest_sigmas;  // ascending, nonstructural
};

struct NullspaceResult {
  std::vector<CoefficientVector> vectors;
  std::vector<double> singular_values;  // smallest relative sigmas of the fine run, ascending
  double subspace_angle_to_previous_truncation = 0.0;
  int accepted_dimension = 0;
  bool converged = true;
  std::string diagnostics;
  TruncationRun coarse;
  TruncationRun fine;
  double residual_norm = 0.0;  // max ||B f|| over accepted vectors of the fine run
};

/// nullspace + tail_filter at N and 2N, matched by dimension and principal angle.
/// Returns the fine-truncation vectors.
NullspaceResult solve(const DiffOperator& p, int k0, int k_diamond, int n, const NullspaceOptions& opt = {});

}  // namespace psi_spectral

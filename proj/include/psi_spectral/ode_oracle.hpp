#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "psi_spectral/diff_operator.hpp"
#include "psi_spectral/reconstruction.hpp"

namespace psi_spectral {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// First-order system v' = A(x) v for P f = 0 with v = (f, f', ..., f^(M-1)).
/// A has ones on the superdiagonal and bottom row -p_l(x)/p_M(x).
class StandardForm {
 public:
  explicit StandardForm(const DiffOperator& p, double root_tol = 1e-12);

  int dimension() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<RealRoot>& singular_points() const noexcept { return singular_; }
  /// Open intervals between consecutive singular points.
  const std::vector<Interval>& validity_intervals() const noexcept { return intervals_; }
  /// True when no singular point lies in the closed interval [min(a,b), max(a,b)].
  bool regular_on(double a, double b) const;

  /// Throws DomainError where |p_M(x)| < 1e-12 * (sum_j |p_Mj| |x|^j).
  Eigen::MatrixXcd matrix(double x) const;
  /// A(x) v without forming the matrix.
  Eigen::VectorXcd apply(double x, const Eigen::VectorXcd& v) const;

 private:
  std::vector<NumericPoly> coeffs_;
  std::vector<double> lead_abs_;
  std::vector<RealRoot> singular_;
  std::vector<Interval> intervals_;
};

struct Trajectory {
  std::vector<double> x;
  std::vector<Eigen::VectorXcd> state;
};

/// Classical RK4 with (x1 - x0) / steps spacing. Refuses intervals containing a singular point.
Trajectory integrate(const StandardForm& sf, double x0, const Eigen::VectorXcd& v0, double x1, int steps = 4096);

struct CrosscheckReport {
  double max_deviation = 0.0;
  double at_x = 0.0;
  int samples = 0;
};

/// Seeds the oracle with f and its derivatives at a, integrates to b, and
/// reports sup |f_oracle - f_N| over the trajectory.
CrosscheckReport crosscheck(const ReconstructedFunction& f, const DiffOperator& p, double a, double b,
                            int steps = 4096, Trajectory* trajectory = nullptr);

/// "x,re_v0,im_v0,re_v1,im_v1,..." rows in %.17g.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

}  // namespace psi_spectral

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psi_spectral/band_matrix.hpp"
#include "psi_spectral/diff_operator.hpp"
#include "psi_spectral/nullspace.hpp"

namespace psi_spectral {

struct Tolerances {
  double sigma_rel_tol = 1e-8;
  double tail_tol = 1e-4;
  double angle_tol = 1e-4;
  double root_tol = 1e-12;
  double rationalize_tol = 1e-15;
  double singular_guard = 1e-6;
  int rk4_steps = 4096;
};

/// Problem file contents. Grammar (one statement per line, '#' starts a comment):
///
///   order M
///   p <m> = c0 c1 ...            polynomial coefficient of D^m, lowest power first
///   r <m> = a0 a1 ... | b0 b1 ...  rational coefficient num | den
///   k0 <int>
///   lambda <gaussian rational or decimal>
///   kdiamond <int>
///   truncation <int>
///   sigma_tol | tail_tol | angle_tol <real>
///   sample <a> <b> <count>       grid for residual/sample output
///   oracle <a> <b>               interval for the ODE crosscheck
///
/// Coefficients are rationals "a/b" or Gaussian rationals "a/b+c/d*i".
struct ProblemSpec {
  RationalDiffOperator op{std::vector<RationalFunction>{}};
  int k0 = 0;
  GaussianRational lambda;
  std::optional<int> k_diamond;
  int truncation = 80;
  Tolerances tol;
  double sample_lo = -4.0;
  double sample_hi = 4.0;
  int sample_count = 161;
  double oracle_lo = 0.0;
  double oracle_hi = 1.0;
};

/// Throws SpecError with the offending line number.
ProblemSpec parse_problem(std::istream& is);
ProblemSpec parse_problem_file(const std::filesystem::path& path);

/// "a/b+c/d*i" exactly, or a decimal rationalised within tol.
GaussianRational parse_lambda(const std::string& text, double tol = 1e-15);

/// P = l R - lambda l.
DiffOperator folded_operator(const ProblemSpec& spec);
/// Explicit k_diamond (validated against k0 - s0) or min(k0 - s0, k0 - deg l).
int resolve_k_diamond(const ProblemSpec& spec, const DiffOperator& p);

enum ExitCode { kSuccess = 0, kSpecError = 2, kPreconditionError = 3, kNotConverged = 4 };

struct CommandResult {
  int exit_code = kSuccess;
  std::vector<std::string> artifacts;  // file names written under the output directory
  std::string summary;
};

CommandResult cmd_assemble(const ProblemSpec& spec, const std::filesystem::path& out_dir);
CommandResult cmd_solve(const ProblemSpec& spec, const std::filesystem::path& out_dir);
CommandResult cmd_scan(const ProblemSpec& spec, double from, double to, double step,
                       const std::filesystem::path& out_dir);
CommandResult cmd_verify(const ProblemSpec& spec, const std::filesystem::path& coeff_csv,
                         const std::filesystem::path& out_dir);

struct ScanPoint {
  double lambda = 0.0;
  double min_sigma = 0.0;
  int accepted_dimension = 0;
};

/// lambda = from + i*step for from <= lambda <= to (+ step/1e6 slack); empty if step <= 0 or to < from.
std::vector<double> scan_grid(double from, double to, double step);
std::vector<ScanPoint> scan(const ProblemSpec& spec, const std::vector<double>& lambdas);
/// Indices of local minima of min_sigma (strictly below each existing neighbour).
std::vector<std::size_t> scan_local_minima(const std::vector<ScanPoint>& points);

/// Parses "FROM:TO:STEP".
void parse_scan_range(const std::string& text, double& from, double& to, double& step);

}  // namespace psi_spectral

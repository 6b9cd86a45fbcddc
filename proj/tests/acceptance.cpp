// Acceptance suite: one PASS/FAIL line per criterion.
//
//   psi_spectral_acceptance            run every criterion
//   psi_spectral_acceptance 3 5        run the listed criteria
//
// Exit status is 0 only if every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "problems.hpp"
#include "psi_spectral/band_matrix.hpp"
#include "psi_spectral/cli.hpp"
#include "psi_spectral/nullspace.hpp"
#include "psi_spectral/ode_oracle.hpp"
#include "psi_spectral/psi_basis.hpp"
#include "psi_spectral/reconstruction.hpp"

using namespace psi_spectral;
using namespace testing_problems;

namespace {

namespace tol {
constexpr double kGram = 1e-8;
constexpr int kGramNodes = 2048;
constexpr double kGramSeconds = 10;
constexpr double kRecursion = 1e-12;
constexpr int kRecursionSamples = 100;
constexpr double kRecursionSeconds = 1;
constexpr int kBandCols = 200;
constexpr double kBandSeconds = 30;
constexpr double kC22Bound = 0.5;
constexpr double kC21Ratio = 1.5;
constexpr double kHermiteShape = 1e-6;
constexpr double kHermiteResidual = 1e-5;
constexpr double kHermiteOracle = 1e-6;
constexpr double kHermiteSeconds = 60;
constexpr double kRationalAlign = 1e-2;
constexpr double kRationalTail = 1e-4;
constexpr int kRationalMaxN = 600;
constexpr double kRationalSeconds = 300;
constexpr double kParseval = 1e-8;
constexpr double kMatrixAction = 1e-8;
constexpr double kPointwiseGain = 10;
constexpr double kScanWindow = 0.25;
}  // namespace tol

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string secs(const Stopwatch& w, double limit) {
  return fmt("%.2f s", w.seconds()) + fmt(" (limit %g s)", limit);
}

Outcome basis_orthonormality() {
  Stopwatch w;
  const auto& q = theta_quadrature(tol::kGramNodes);
  double worst = 0.0;
  for (int k = -2; k <= 3; ++k) {
    std::vector<std::vector<Complex>> s;
    for (int nd = -8; nd <= 8; ++nd) {
      std::vector<Complex> v(q.x().size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = eval_psi({k, nd}, q.x()[i]) / std::sqrt(kPi);
      s.push_back(std::move(v));
    }
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b)
        worst = std::max(worst, std::abs(q.inner_product(k, s[a], s[b]) - (a == b ? 1.0 : 0.0)));
  }
  const bool fast = w.seconds() < tol::kGramSeconds;
  return {worst < tol::kGram && fast, fmt("max |G - I| = %.3g", worst) + fmt(" (tol %g), ", tol::kGram) +
                                          secs(w, tol::kGramSeconds)};
}

Outcome recursion_identities() {
  Stopwatch w;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> kd(-4, 4), nd(-12, 12);
  std::uniform_real_distribution<double> xd(-8.0, 8.0);
  const Complex i(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < tol::kRecursionSamples; ++s) {
    const int k = kd(rng), r = nd(rng);
    const double x = xd(rng);
    const auto psi = [&](int kk, int rr) { return eval_psi({kk, rr}, x); };
    const auto rel = [](Complex lhs, Complex rhs, double scale) { return std::abs(lhs - rhs) / scale; };

    const Complex a = psi(k - 1, r), b = psi(k - 1, r + 1);
    worst = std::max(worst, rel(psi(k, r), -0.5 * i * (a - b), std::abs(a) + std::abs(b)));
    worst = std::max(worst, rel(x * psi(k, r), 0.5 * (a + b), std::abs(a) + std::abs(b)));

    // closed-form derivative of (x+i)^{-(k+1)} ((x-i)/(x+i))^r
    const Complex dpsi = psi(k, r) * (-(k + 1.0) / (x + i) + double(r) * (1.0 / (x - i) - 1.0 / (x + i)));
    const Complex c = psi(k + 1, r - 1), d = psi(k + 1, r);
    const Complex rhs = double(r) * c - double(r + k + 1) * d;
    worst = std::max(worst, rel(dpsi, rhs, std::abs(double(r) * c) + std::abs(double(r + k + 1) * d)));
  }
  const bool fast = w.seconds() < tol::kRecursionSeconds;
  return {worst < tol::kRecursion && fast, fmt("max relative defect %.3g", worst) +
                                               fmt(" (tol %g) over ", tol::kRecursion) +
                                               std::to_string(tol::kRecursionSamples) + " samples, " +
                                               secs(w, tol::kRecursionSeconds)};
}

struct NamedProblem {
  const char* name;
  DiffOperator p;
  int k0;
  int k_diamond;
};

std::vector<NamedProblem> band_problems() {
  return {{"d/dx", DiffOperator({Poly{}, Poly::constant(1)}), 0, -1},
          {"hermite", hermite(1), 0, -2},
          {"rational", rational_problem(), -8, -16}};
}

Outcome band_structure() {
  Stopwatch w;
  bool ok = true;
  std::string detail;
  for (const auto& np : band_problems()) {
    const BandMatrix b = assemble(np.p, np.k0, np.k_diamond, tol::kBandCols);
    const int l0 = 2 * np.p.order() + np.k0 - np.k_diamond;
    long outside = 0;
    for (int n = 0; n < b.n_cols(); ++n)
      for (const auto& e : b.column(n))
        if (std::abs(e.row - n) > l0 && !e.value.is_zero()) ++outside;
    ok = ok && outside == 0;
    detail += std::string(np.name) + ": " + std::to_string(outside) + " nonzeros outside |m-n| <= " +
              std::to_string(l0) + "; ";
  }
  const bool fast = w.seconds() < tol::kBandSeconds;
  return {ok && fast, detail + "nCols = " + std::to_string(tol::kBandCols) + ", " + secs(w, tol::kBandSeconds)};
}

Outcome condition_audit() {
  bool ok = true;
  std::string detail;
  for (const auto& np : band_problems()) {
    const ConditionsReport c40 = audit_conditions(assemble(np.p, np.k0, np.k_diamond, 40),
                                                  CharacteristicOperator{np.k_diamond});
    const ConditionsReport c80 = audit_conditions(assemble(np.p, np.k0, np.k_diamond, 80),
                                                  CharacteristicOperator{np.k_diamond});
    const double ratio = c80.c21_sup_estimate / c40.c21_sup_estimate;
    ok = ok && c80.c22_min_ratio > tol::kC22Bound && c40.c22_min_ratio > tol::kC22Bound && ratio < tol::kC21Ratio;
    detail += std::string(np.name) + fmt(": c22 min ratio %.17g", std::min(c40.c22_min_ratio, c80.c22_min_ratio)) +
              fmt(", c21 ratio 80/40 %.4g; ", ratio);
  }
  return {ok, detail + fmt("need c22 > %g", tol::kC22Bound) + fmt(" and c21 ratio < %g", tol::kC21Ratio)};
}

Outcome hermite_eigenproblem() {
  Stopwatch w;
  const NullspaceResult r1 = solve(hermite(1), 0, -2, 80);
  const NullspaceResult r2 = solve(hermite(2), 0, -2, 80);
  std::string detail = "lambda=1 dim " + std::to_string(r1.accepted_dimension) + ", lambda=2 dim " +
                       std::to_string(r2.accepted_dimension);
  bool ok = r1.accepted_dimension == 1 && r2.accepted_dimension == 0;
  if (r1.accepted_dimension == 1) {
    const ReconstructedFunction f(0, r1.vectors[0].values);
    const Alignment a = align_and_compare(f, gaussian, uniform_grid(-4, 4, 801));
    const double res = max_residual(hermite(1), f, uniform_grid(-3, 3, 601));
    const double dev = crosscheck(f, hermite(1), 0, 2).max_deviation;
    ok = ok && a.max_abs_err < tol::kHermiteShape && res < tol::kHermiteResidual && dev < tol::kHermiteOracle;
    detail += fmt("; shape err %.3g", a.max_abs_err) + fmt(" (tol %g)", tol::kHermiteShape) +
              fmt(", residual %.3g", res) + fmt(" (tol %g)", tol::kHermiteResidual) +
              fmt(", oracle %.3g", dev) + fmt(" (tol %g)", tol::kHermiteOracle);
  }
  const bool fast = w.seconds() < tol::kHermiteSeconds;
  return {ok && fast, detail + ", " + secs(w, tol::kHermiteSeconds)};
}

Outcome rational_problem_recovery() {
  Stopwatch w;
  const DiffOperator p = rational_problem();
  const int n = 200;
  const NullspaceResult r = solve(p, -8, -16, n);
  std::string detail = "N = " + std::to_string(n) + " (limit " + std::to_string(tol::kRationalMaxN) +
                       "), dim " + std::to_string(r.accepted_dimension);
  bool ok = r.converged && r.accepted_dimension >= 1 && n <= tol::kRationalMaxN;
  if (r.accepted_dimension >= 1) {
    std::vector<ReconstructedFunction> fs;
    double tail = 0.0;
    for (const auto& v : r.vectors) {
      fs.emplace_back(-8, v.values);
      tail = std::max(tail, v.tail_fraction);
    }
    const Alignment a = align_subspace(fs, rational_cos, uniform_grid(-2, 2, 801));
    ok = ok && a.rel_l2_err < tol::kRationalAlign && tail < tol::kRationalTail;
    detail += fmt(", rel L2 err %.3g", a.rel_l2_err) + fmt(" (tol %g)", tol::kRationalAlign) +
              fmt(", tail mass %.3g", tail) + fmt(" (tol %g)", tol::kRationalTail);
  }
  const bool fast = w.seconds() < tol::kRationalSeconds;
  return {ok && fast, detail + ", " + secs(w, tol::kRationalSeconds)};
}

Outcome parseval_and_matrix_action() {
  constexpr int n = 64;
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  const DiffOperator p = hermite(1);
  const FloatMatrix fm = export_float(assemble(p, 0, -2, n));
  const auto rows = static_cast<int>(fm.dense.rows());
  double norm_err = 0.0, action_err = 0.0;
  for (int s = 0; s < 20; ++s) {
    std::vector<Complex> c(n);
    Eigen::VectorXcd cv(n);
    for (int j = 0; j < n; ++j) cv(j) = c[static_cast<std::size_t>(j)] = Complex(nd(rng), nd(rng));
    const ReconstructedFunction f(0, c);
    norm_err = std::max(norm_err, std::abs(f.quadrature_norm(2048) - f.l2_norm()));
    const Eigen::VectorXcd bc = fm.dense * cv;
    const auto proj = project([&](double x) { return residual(p, f, x).value; }, -2, rows, 2048);
    for (int m = 0; m < rows; ++m)
      action_err = std::max(action_err, std::abs(proj[static_cast<std::size_t>(m)] - bc(m)) / std::max(1.0, std::abs(bc(m))));
  }
  return {norm_err < tol::kParseval && action_err < tol::kMatrixAction,
          fmt("max |quad norm - l2 norm| %.3g", norm_err) + fmt(" (tol %g)", tol::kParseval) +
              fmt(", max relative |<Pf, e_m> - (Bc)_m| %.3g", action_err) + fmt(" (tol %g)", tol::kMatrixAction) +
              ", 20 vectors, N = 64"};
}

Outcome pointwise_convergence() {
  const auto c = project(gaussian, 0, 128, 2048);
  double worst_gain = 1e300;
  for (double x : {0.0, 1.0, -1.0, 3.0, -3.0}) {
    const auto err = [&](int n) {
      return std::abs(ReconstructedFunction(0, std::vector<Complex>(c.begin(), c.begin() + n)).eval(x) - gaussian(x));
    };
    worst_gain = std::min(worst_gain, err(32) / err(128));
  }
  return {worst_gain >= tol::kPointwiseGain,
          fmt("smallest error ratio N=32 / N=128 over x in {0, +-1, +-3}: %.3g", worst_gain) +
              fmt(" (need >= %g)", tol::kPointwiseGain)};
}

Outcome lambda_scan() {
  ProblemSpec spec;
  spec.op = RationalDiffOperator({RationalFunction(Poly({0, 0, 1})), RationalFunction(), RationalFunction(Poly::constant(-1))});
  spec.truncation = 80;
  const auto pts = scan(spec, scan_grid(0, 6, 0.25));
  const auto minima = scan_local_minima(pts);
  bool ok = !minima.empty();
  std::string where;
  for (std::size_t i : minima) {
    const double l = pts[i].lambda;
    const double d = std::min({std::abs(l - 1), std::abs(l - 3), std::abs(l - 5)});
    ok = ok && d <= tol::kScanWindow;
    where += fmt(" %g", l);
  }
  return {ok, "local minima at" + (where.empty() ? std::string(" (none)") : where) +
                  fmt(", window %g around {1, 3, 5}", tol::kScanWindow)};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "basis orthonormality", basis_orthonormality},
      {2, "recursion identities", recursion_identities},
      {3, "exact band structure", band_structure},
      {4, "condition audit", condition_audit},
      {5, "hermite eigenproblem", hermite_eigenproblem},
      {6, "rational-coefficient eigenfunction", rational_problem_recovery},
      {7, "parseval and matrix action", parseval_and_matrix_action},
      {8, "pointwise convergence", pointwise_convergence},
      {9, "lambda scan", lambda_scan},
  };
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));

  bool all_pass = true;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("criterion %d %s: %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "problems.hpp"
#include "psi_spectral/band_matrix.hpp"
#include "psi_spectral/errors.hpp"
#include "psi_spectral/nullspace.hpp"
#include "psi_spectral/reconstruction.hpp"

using namespace psi_spectral;
using namespace testing_problems;

namespace {

std::vector<Complex> random_coeffs(std::mt19937& rng, int n) {
  std::normal_distribution<double> nd;
  std::vector<Complex> c(static_cast<std::size_t>(n));
  for (auto& v : c) v = Complex(nd(rng), nd(rng));
  return c;
}

const ReconstructedFunction& hermite_solution() {
  static const ReconstructedFunction f = [] {
    const NullspaceResult r = solve(hermite(1), 0, -2, 80);
    return ReconstructedFunction(0, r.vectors.at(0).values);
  }();
  return f;
}

}  // namespace

TEST_SUITE("reconstruction") {

TEST_CASE("evaluation basics") {
  const ReconstructedFunction zero(0, std::vector<Complex>(10));
  CHECK(zero.eval(1.3) == Complex(0.0));
  CHECK(zero.l2_norm() == 0.0);
  const ReconstructedFunction single(0, {std::sqrt(std::numbers::pi)});
  CHECK(std::abs(single.eval(0.0) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(single.eval(0.8) - eval_psi({0, -1}, 0.8)) < 1e-15);
  CHECK(single.eval_derivative(0, 0.4) == single.eval(0.4));
  CHECK_THROWS_AS(single.eval_derivative(5, 0.0), PreconditionError);
}

TEST_CASE("derivative of a single basis term") {
  // e_1 at k0 = 0 is psi_{0,0}/sqrt(pi); its derivative is -psi_{1,0}/sqrt(pi)
  const ReconstructedFunction f(0, {0.0, 1.0});
  CHECK(std::abs(f.eval_derivative(1, 1.2) + eval_psi({1, 0}, 1.2) / std::sqrt(std::numbers::pi)) < 1e-15);
}

TEST_CASE("hermite solution matches the gaussian") {
  const auto& f = hermite_solution();
  const Alignment a = align_and_compare(f, gaussian, uniform_grid(-4, 4, 161));
  CHECK(a.max_abs_err < 1e-6);
  CHECK(a.rel_l2_err < 1e-6);
  CHECK(std::abs(f.eval(0.0) / a.alpha[0] - 1.0) < 1e-6);
  CHECK(max_residual(hermite(1), f, uniform_grid(-3, 3, 121)) < 1e-5);
}

TEST_CASE("derivatives agree with finite differences") {
  const auto& f = hermite_solution();
  const double x = 0.5;
  const Complex exact = f.eval_derivative(1, x);
  double prev_err = 0.0;
  for (double h : {1e-3, 5e-4, 2.5e-4}) {
    const Complex fd = (f.eval(x + h) - f.eval(x - h)) / (2 * h);
    const double err = std::abs(fd - exact);
    if (prev_err > 0) CHECK(std::log2(prev_err / err) > 1.9);
    prev_err = err;
  }
  const double h = 1e-5;
  CHECK(std::abs((f.eval(x + h) - f.eval(x - h)) / (2 * h) - exact) < 1e-7);
}

TEST_CASE("residual of non-solutions is not small") {
  std::mt19937 rng(17);
  const ReconstructedFunction f(0, random_coeffs(rng, 40));
  CHECK(max_residual(hermite(1), f, uniform_grid(-3, 3, 61)) > 1e-2);
  const ReconstructedFunction zero(0, {});
  CHECK(max_residual(hermite(1), zero, uniform_grid(-3, 3, 11)) == 0.0);
}

TEST_CASE("residual flags points near singular points") {
  const DiffOperator p({Poly::constant(1), Poly{}, Poly::x()});
  const ReconstructedFunction f(0, {1.0, 0.5});
  CHECK(residual(p, f, 1e-8).near_singular);
  CHECK_FALSE(residual(p, f, 0.1).near_singular);
}

TEST_CASE("alignment") {
  const ReconstructedFunction f(1, {0.3, Complex(0.1, -0.2), 0.05});
  const auto g = [&](double x) { return f.eval(x) / Complex(0, 3); };
  const Alignment a = align_and_compare(f, g, uniform_grid(-2, 2, 41));
  CHECK(std::abs(a.alpha[0] - Complex(0, 3)) < 1e-12);
  CHECK(a.max_abs_err < 1e-14);
  CHECK(a.rel_l2_err < 1e-14);
  CHECK_THROWS_AS(align_and_compare(f, [](double) { return Complex(0.0); }, uniform_grid(-1, 1, 5)), DomainError);
  CHECK_THROWS_AS(align_and_compare(f, g, {}), PreconditionError);
}

TEST_CASE("rational problem solution matches up to scalar") {
  const NullspaceResult r = solve(rational_problem(), -8, -16, 200);
  REQUIRE(r.accepted_dimension == 2);
  std::vector<ReconstructedFunction> fs;
  for (const auto& v : r.vectors) fs.emplace_back(-8, v.values);
  const Alignment a = align_subspace(fs, rational_cos, uniform_grid(-2, 2, 401));
  CHECK(a.rel_l2_err < 1e-2);
}

TEST_CASE("parseval") {
  std::mt19937 rng(23);
  for (int k0 : {-2, 0, 1}) {
    const ReconstructedFunction f(k0, random_coeffs(rng, 30));
    CHECK(std::abs(f.quadrature_norm(2048) - f.l2_norm()) < 1e-8);
  }
  std::vector<Complex> unit(5);
  unit[3] = 1.0;
  CHECK(ReconstructedFunction(0, unit).l2_norm() == 1.0);
}

TEST_CASE("quadrature projection reproduces the matrix action") {
  const DiffOperator p = hermite(1);
  const BandMatrix b = assemble(p, 0, -2, 64);
  const FloatMatrix fm = export_float(b);
  std::mt19937 rng(29);
  const auto c = random_coeffs(rng, 64);
  const ReconstructedFunction f(0, c);
  Eigen::VectorXcd cv(64);
  for (int n = 0; n < 64; ++n) cv(n) = c[static_cast<std::size_t>(n)];
  const Eigen::VectorXcd bc = fm.dense * cv;
  const auto pf = [&](double x) { return residual(p, f, x).value; };
  const auto proj = project(pf, -2, b.n_rows(), 2048);
  for (int m = 0; m < b.n_rows(); ++m)
    CHECK(std::abs(proj[static_cast<std::size_t>(m)] - bc(m)) < 1e-8 * (1 + std::abs(bc(m))));
}

TEST_CASE("partial sums converge pointwise") {
  const auto c = project(gaussian, 0, 128, 2048);
  for (double x : {0.0, 1.0, -1.0, 3.0, -3.0}) {
    double last = 1e300;
    for (int n : {32, 64, 128}) {
      const ReconstructedFunction f(0, std::vector<Complex>(c.begin(), c.begin() + n));
      const double err = std::abs(f.eval(x) - gaussian(x));
      CHECK(err < last);
      last = err;
    }
  }
}

TEST_CASE("coefficient csv round trip") {
  std::mt19937 rng(31);
  const ReconstructedFunction f(-3, random_coeffs(rng, 12));
  std::ostringstream os;
  write_coefficient_csv(os, f);
  std::istringstream is(os.str());
  const auto back = read_coefficient_csv(is);
  CHECK(back == f.coeffs());
  std::istringstream empty("n,n_dot,re,im\n");
  CHECK(read_coefficient_csv(empty).empty());
  std::istringstream bad("n,n_dot,re,im\n0,0,1,0\n2,1,1,0\n");
  CHECK_THROWS_WITH_AS(read_coefficient_csv(bad), doctest::Contains("line 3"), SpecError);
  std::istringstream garbage("0,0,abc,0\n");
  CHECK_THROWS_AS(read_coefficient_csv(garbage), SpecError);
}

TEST_CASE("sample csv layout") {
  const ReconstructedFunction f(0, {1.0});
  std::ostringstream os;
  write_sample_csv(os, hermite(1), f, {0.0, 1.0});
  const std::string s = os.str();
  CHECK(s.rfind("x,re_f,im_f,re_residual,im_residual\n0,", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}

}  // TEST_SUITE

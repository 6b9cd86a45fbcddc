#include <doctest.h>

#include <cmath>
#include <random>

#include "problems.hpp"
#include "psi_spectral/errors.hpp"
#include "psi_spectral/nullspace.hpp"
#include "psi_spectral/reconstruction.hpp"

using namespace psi_spectral;
using namespace testing_problems;

TEST_SUITE("l2_nullspace") {

TEST_CASE("zero matrix has a full kernel") {
  const KernelCandidates k = nullspace(Eigen::MatrixXcd::Zero(5, 5), 1e-8);
  CHECK(k.vectors.cols() == 5);
  for (double s : k.sigmas) CHECK(s == 0.0);
  const KernelCandidates k2 = nullspace(Eigen::MatrixXcd::Zero(3, 5), 1e-8);
  CHECK(k2.vectors.cols() == 5);
}

TEST_CASE("diagonal band has an empty kernel") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) d(i, i) = 1.0 + i;
  CHECK(nullspace(d, 1e-8).vectors.cols() == 0);
  CHECK_THROWS_AS(nullspace(d, 0.0), PreconditionError);
  CHECK_THROWS_AS(nullspace(d, 1.0), PreconditionError);
}

TEST_CASE("hermite kernel candidates and filter") {
  const BandMatrix b = assemble(hermite(1), 0, -2, 80);
  const FloatMatrix f = export_float(b);
  const KernelCandidates k = nullspace(f.dense, 1e-8);
  // every non-structural sigma is above tolerance; the candidates are the structural directions
  CHECK(k.vectors.cols() == b.bandwidth());
  CHECK(k.spectrum[static_cast<std::size_t>(b.bandwidth())] > 1e-8 * k.sigma_max);
  const TailFilterResult t = tail_filter(k.vectors, 1e-4);
  CHECK(t.accepted.cols() == 1);
  CHECK(t.rejected_fractions.size() == 5);
  for (double r : t.rejected_fractions) CHECK(r > 1e-4);
}

TEST_CASE("tail filter examples") {
  Eigen::MatrixXcd spike = Eigen::MatrixXcd::Zero(40, 1);
  spike(39, 0) = 1.0;
  CHECK(tail_filter(spike, 1e-4).accepted.cols() == 0);

  Eigen::MatrixXcd geo(40, 1);
  for (int n = 0; n < 40; ++n) geo(n, 0) = std::pow(2.0, -n);
  const TailFilterResult g = tail_filter(geo, 1e-4);
  REQUIRE(g.accepted.cols() == 1);
  CHECK(g.accepted.col(0).norm() == doctest::Approx(1.0));

  const auto c = project(gaussian, 0, 80, 2048);
  Eigen::MatrixXcd v(80, 1);
  for (int n = 0; n < 80; ++n) v(n, 0) = c[static_cast<std::size_t>(n)];
  const TailFilterResult h = tail_filter(v, 1e-4);
  REQUIRE(h.accepted.cols() == 1);
  CHECK(h.accepted_fractions[0] < 1e-6);
}

TEST_CASE("tail filter output is orthonormal and basis independent") {
  std::mt19937 rng(4);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(60, 3);
  for (int j = 0; j < 3; ++j)
    for (int n = 0; n < 60; ++n) v(n, j) = Complex(nd(rng), nd(rng)) * std::pow(0.6, n);
  v.col(2) += Eigen::VectorXcd::Ones(60);  // heavy tail
  const TailFilterResult a = tail_filter(v, 1e-4);
  CHECK(a.accepted.cols() == 2);
  CHECK((a.accepted.adjoint() * a.accepted - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
  Eigen::MatrixXcd mix = Eigen::MatrixXcd::Random(3, 3);
  const TailFilterResult b = tail_filter(v * mix, 1e-4);
  REQUIRE(b.accepted.cols() == 2);
  CHECK(max_principal_angle(a.accepted, b.accepted) < 1e-8);
}

TEST_CASE("principal angles") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 1), b = Eigen::MatrixXcd::Zero(3, 1);
  a(0, 0) = 1.0;
  b(0, 0) = std::cos(0.3);
  b(1, 0) = std::sin(0.3);
  CHECK(max_principal_angle(a, b) == doctest::Approx(0.3));
  CHECK(max_principal_angle(a, a * Complex(0, 1)) < 1e-15);
}

TEST_CASE("solve hermite") {
  const NullspaceResult r1 = solve(hermite(1), 0, -2, 80);
  CHECK(r1.converged);
  CHECK(r1.accepted_dimension == 1);
  REQUIRE(r1.vectors.size() == 1);
  CHECK(r1.vectors[0].values.size() == 160);
  CHECK(r1.subspace_angle_to_previous_truncation < 1e-4);
  CHECK(r1.residual_norm <= 10 * r1.fine.sigma_max * 1e-8);
  double norm = 0.0;
  for (const auto& c : r1.vectors[0].values) norm += std::norm(c);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

  const NullspaceResult r2 = solve(hermite(2), 0, -2, 80);
  CHECK(r2.accepted_dimension == 0);
  CHECK(r2.converged);
  CHECK(r2.vectors.empty());
}

TEST_CASE("accepted vectors survive scaling of the operator") {
  const DiffOperator h = hermite(3);
  std::vector<Poly> scaled;
  for (const auto& c : h.coeffs()) scaled.push_back(c * GaussianRational(Rational(2), Rational(-5, 3)));
  const NullspaceResult a = solve(h, 0, -2, 80);
  const NullspaceResult b = solve(DiffOperator(scaled), 0, -2, 80);
  REQUIRE(a.accepted_dimension == 1);
  REQUIRE(b.accepted_dimension == 1);
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < a.vectors[0].values.size(); ++i)
    overlap += std::conj(a.vectors[0].values[i]) * b.vectors[0].values[i];
  CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coarse truncation of an excited state is reported as non-converged") {
  const NullspaceResult r = solve(hermite(5), 0, -2, 60);
  CHECK_FALSE(r.converged);
  CHECK(r.accepted_dimension == 0);
  CHECK(r.diagnostics.find("principal angle") != std::string::npos);
}

TEST_CASE("leading block min sigma does not grow with truncation") {
  double last = 1.0;
  for (int n : {40, 60, 80}) {
    const double s = leading_block_min_sigma(export_float(assemble(hermite(1), 0, -2, n)).dense);
    CHECK(s <= last * 1.1);
    last = s;
  }
}

TEST_CASE("accepted hermite vector reconstructs a true solution") {
  const NullspaceResult r = solve(hermite(5), 0, -2, 120);
  REQUIRE(r.accepted_dimension == 1);
  const ReconstructedFunction f(0, r.vectors[0].values);
  CHECK(max_residual(hermite(5), f, uniform_grid(-3, 3, 61)) < 1e-5);
}

TEST_CASE("rational problem has a two-dimensional solution space") {
  const NullspaceResult r = solve(rational_problem(), -8, -16, 200);
  CHECK(r.converged);
  CHECK(r.accepted_dimension == 2);
}

}  // TEST_SUITE

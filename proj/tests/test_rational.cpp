#include <doctest.h>

#include <cmath>
#include <random>

#include "psi_spectral/errors.hpp"
#include "psi_spectral/rational.hpp"

using namespace psi_spectral;

TEST_SUITE("operator_core") {

TEST_CASE("rational parse accepts canonical text") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK(Rational::parse("0") == Rational(0));
  CHECK(Rational::parse("-12/5").to_string() == "-12/5");
}

TEST_CASE("rational parse rejects malformed text") {
  CHECK_THROWS_AS(Rational::parse("3/0"), SpecError);
  CHECK_THROWS_AS(Rational::parse("2/4"), SpecError);
  CHECK_THROWS_AS(Rational::parse("1/-2"), SpecError);
  CHECK_THROWS_AS(Rational::parse(""), SpecError);
  CHECK_THROWS_AS(Rational::parse("1.5"), SpecError);
  CHECK_THROWS_AS(Rational::parse("x"), SpecError);
}

TEST_CASE("rational to_double rounds to nearest") {
  CHECK(Rational(1, 3).to_double() == 1.0 / 3.0);
  CHECK(Rational(-2, 7).to_double() == -2.0 / 7.0);
  const Rational big(mpq_class("123456789012345678901234567890/7"));
  CHECK(big.to_double() == doctest::Approx(1.7636684144620811e28).epsilon(1e-15));
}

TEST_CASE("rational approximate recovers simple fractions") {
  CHECK(Rational::approximate(0.75, 1e-15) == Rational(3, 4));
  CHECK(Rational::approximate(-6.0, 1e-15) == Rational(-6));
  CHECK(Rational::approximate(1.0 / 3.0, 1e-15) == Rational(1, 3));
  const Rational pi = Rational::approximate(3.141592653589793, 1e-6);
  CHECK(std::abs(pi.to_double() - 3.141592653589793) <= 1e-6);
}

TEST_CASE("gaussian rational parse and arithmetic") {
  const auto a = GaussianRational::parse("1/2+3/4*i");
  CHECK(a == GaussianRational(Rational(1, 2), Rational(3, 4)));
  CHECK(GaussianRational::parse("-2*i") == GaussianRational(Rational(0), Rational(-2)));
  CHECK(GaussianRational::parse("5") == GaussianRational(5));
  CHECK(GaussianRational::parse("1-1*i") == GaussianRational(Rational(1), Rational(-1)));
  CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(-1));
  CHECK(a * a.conj() == GaussianRational(a.norm()));
  CHECK(a / a == GaussianRational(1));
  CHECK_THROWS(GaussianRational(1) / GaussianRational(0));
}

TEST_CASE("gaussian rational field axioms hold on random samples") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  auto draw = [&] { return GaussianRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))); };
  for (int t = 0; t < 200; ++t) {
    const auto a = draw(), b = draw(), c = draw();
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) - b == a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK((a * b).conj() == a.conj() * b.conj());
  }
}

}  // TEST_SUITE

#include "psi_spectral/rational.hpp"

#include <cctype>
#include <cmath>
#include <mpfr.h>

#include "psi_spectral/errors.hpp"

namespace psi_spectral {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::parse(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den)))
    throw SpecError("malformed rational '" + original + "'");

  mpz_class n(std::string(num), 10);
  mpz_class d(1);
  if (slash != std::string_view::npos) {
    d = mpz_class(std::string(den), 10);
    if (d == 0) throw SpecError("zero denominator in '" + original + "'");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (g != 1 && n != 0) throw SpecError("rational '" + original + "' is not in lowest terms");
    if (n == 0 && d != 1) throw SpecError("rational '" + original + "' is not in lowest terms");
  }
  if (negative) n = -n;
  mpq_class q(n, d);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational Rational::approximate(double value, double tol) {
  if (!std::isfinite(value)) throw std::domain_error("Rational::approximate: non-finite value");
  const mpq_class target(value);  // exact binary value
  const mpq_class eps(tol);
  // Convergents h/k of the continued fraction of target.
  mpz_class h1(1), h2(0), k1(0), k2(1);
  mpq_class rest = target;
  for (int iter = 0; iter < 200; ++iter) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    mpz_class h = a * h1 + h2;
    mpz_class k = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    mpq_class approx(h, k);
    approx.canonicalize();
    if (abs(mpq_class(approx - target)) <= eps) return Rational(approx);
    mpq_class frac = rest - mpq_class(a);
    if (sgn(frac) == 0) return Rational(approx);
    rest = 1 / frac;
  }
  return Rational(target);
}

double Rational::to_double() const {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, q_.get_mpq_t(), MPFR_RNDN);
  const double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

std::string Rational::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

GaussianRational GaussianRational::parse(std::string_view text) {
  const std::string original(text);
  if (text.empty()) throw SpecError("empty number");
  constexpr std::string_view imag_suffix = "*i";
  if (text.size() < imag_suffix.size() || text.substr(text.size() - imag_suffix.size()) != imag_suffix)
    return GaussianRational(Rational::parse(text));

  std::string_view body = text.substr(0, text.size() - imag_suffix.size());
  const auto split = body.find_last_of("+-");
  if (split == std::string_view::npos || split == 0) {
    if (body.empty()) throw SpecError("malformed gaussian rational '" + original + "'");
    return {Rational(0), Rational::parse(body)};
  }
  const std::string_view re_part = body.substr(0, split);
  std::string_view im_part = body.substr(split);
  if (im_part.front() == '+') im_part.remove_prefix(1);
  if (im_part.empty())
    throw SpecError("malformed gaussian rational '" + original + "'");
  try {
    return {Rational::parse(re_part), Rational::parse(im_part)};
  } catch (const SpecError& e) {
    throw SpecError("malformed gaussian rational '" + original + "' (" + e.what() + ")");
  }
}

std::string GaussianRational::to_string() const {
  if (im_.is_zero()) return re_.to_string();
  if (re_.is_zero()) return im_.to_string() + "*i";
  const std::string im = im_.to_string();
  return re_.to_string() + (im_.sign() < 0 ? "" : "+") + im + "*i";
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (o.im_.is_zero()) {
    re_ *= o.re_;
    im_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("GaussianRational: division by zero");
  const Rational n = o.norm();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

}  // namespace psi_spectral

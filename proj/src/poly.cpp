#include "psi_spectral/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psi_spectral {

Poly::Poly(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(GaussianRational c, int power) {
  if (power < 0) throw std::invalid_argument("Poly::monomial: negative power");
  std::vector<GaussianRational> v(static_cast<std::size_t>(power) + 1);
  v.back() = std::move(c);
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

GaussianRational Poly::coeff(int power) const {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return {};
  return coeffs_[static_cast<std::size_t>(power)];
}

bool Poly::is_real() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) { return c.is_real(); });
}

Poly Poly::real_part() const {
  std::vector<GaussianRational> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.emplace_back(c.re());
  return Poly(std::move(v));
}

Poly Poly::imag_part() const {
  std::vector<GaussianRational> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.emplace_back(c.im());
  return Poly(std::move(v));
}

Poly Poly::monic() const {
  if (is_zero()) return {};
  const GaussianRational lc = leading();
  std::vector<GaussianRational> v = coeffs_;
  for (auto& c : v) c /= lc;
  return Poly(std::move(v));
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<GaussianRational> v(coeffs_.size() - 1);
  for (std::size_t j = 1; j < coeffs_.size(); ++j)
    v[j - 1] = coeffs_[j] * GaussianRational(static_cast<long>(j));
  return Poly(std::move(v));
}

GaussianRational Poly::eval(const GaussianRational& x) const {
  GaussianRational acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

std::complex<double> Poly::eval(std::complex<double> x) const { return NumericPoly(*this)(x); }

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    const bool compound = !coeffs_[j].is_real() && !coeffs_[j].re().is_zero();
    if (compound) os << '(';
    os << coeffs_[j].to_string();
    if (compound) os << ')';
    if (j == 1) os << "*x";
    if (j > 1) os << "*x^" << j;
  }
  return os.str();
}

Poly Poly::operator-() const {
  std::vector<GaussianRational> v = coeffs_;
  for (auto& c : v) c = -c;
  return Poly(std::move(v));
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
  trim();
  return *this;
}

Poly& Poly::operator*=(const GaussianRational& c) {
  for (auto& x : coeffs_) x *= c;
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussianRational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Poly(std::move(v));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<GaussianRational> r = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  std::vector<GaussianRational> q(r.size() - db);
  for (std::size_t k = q.size(); k-- > 0;) {
    if (r[k + db].is_zero()) continue;
    GaussianRational t = r[k + db] / bc[db];
    for (std::size_t j = 0; j <= db; ++j) r[k + j] -= t * bc[j];
    q[k] = std::move(t);
  }
  r.resize(db);
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return divmod(a * b, gcd(a, b)).first.monic();
}

Poly pow(const Poly& p, int e) {
  if (e < 0) throw std::invalid_argument("Poly pow: negative exponent");
  Poly r = Poly::constant(1);
  for (int i = 0; i < e; ++i) r = r * p;
  return r;
}

NumericPoly::NumericPoly(const Poly& p) {
  c_.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) c_.push_back(c.to_complex());
}

std::complex<double> NumericPoly::operator()(double x) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> NumericPoly::operator()(std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RationalFunction::RationalFunction(Poly num, Poly den) {
  if (den.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
  if (num.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  const Poly g = gcd(num, den);
  num = divmod(num, g).first;
  den = divmod(den, g).first;
  const GaussianRational lc = den.leading();
  const GaussianRational inv = GaussianRational(1) / lc;
  num_ = num * inv;
  den_ = den * inv;
}

std::vector<std::pair<Poly, int>> square_free_decomposition(const Poly& p) {
  std::vector<std::pair<Poly, int>> out;
  if (p.degree() <= 0) return out;
  const Poly dp = p.derivative();
  const Poly a0 = gcd(p, dp);
  Poly b = divmod(p, a0).first;
  Poly c = divmod(dp, a0).first;
  Poly d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    Poly a = gcd(b, d);
    if (a.degree() > 0) out.emplace_back(a, i);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = c - b.derivative();
  }
  return out;
}

std::vector<Poly> sturm_sequence(const Poly& p) {
  std::vector<Poly> seq;
  if (p.is_zero()) return seq;
  seq.push_back(p);
  Poly next = p.derivative();
  while (!next.is_zero()) {
    seq.push_back(next);
    const std::size_t n = seq.size();
    next = -divmod(seq[n - 2], seq[n - 1]).second;
  }
  return seq;
}

namespace {

int sign_at(const Poly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    acc *= x;
    acc += it->re().get();
  }
  return sgn(acc);
}

int variations(const std::vector<Poly>& seq, const mpq_class& x) {
  int count = 0;
  int last = 0;
  for (const auto& s : seq) {
    const int sg = sign_at(s, x);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++count;
    last = sg;
  }
  return count;
}

// Roots of a square-free real polynomial in [a, b].
void isolate(const Poly& f, const mpq_class& a, const mpq_class& b, const mpq_class& tol,
             std::vector<double>& roots) {
  const auto seq = sturm_sequence(f);
  if (sign_at(f, a) == 0) roots.push_back(a.get_d());

  struct Bracket {
    mpq_class lo, hi;
    int v_lo, v_hi;
  };
  std::vector<Bracket> stack{{a, b, variations(seq, a), variations(seq, b)}};
  while (!stack.empty()) {
    Bracket br = std::move(stack.back());
    stack.pop_back();
    const int count = br.v_lo - br.v_hi;
    if (count <= 0) continue;
    if (count == 1) {
      if (sign_at(f, br.hi) == 0) {
        roots.push_back(mpq_class(br.hi).get_d());
        continue;
      }
      bool exact = false;
      while (br.hi - br.lo > tol) {
        mpq_class mid = (br.lo + br.hi) / 2;
        if (sign_at(f, mid) == 0) {
          roots.push_back(mid.get_d());
          exact = true;
          break;
        }
        const int v_mid = variations(seq, mid);
        if (br.v_lo - v_mid == 1) {
          br.hi = mid;
          br.v_hi = v_mid;
        } else {
          br.lo = mid;
          br.v_lo = v_mid;
        }
      }
      if (!exact) roots.push_back(mpq_class((br.lo + br.hi) / 2).get_d());
      continue;
    }
    mpq_class mid = (br.lo + br.hi) / 2;
    const int v_mid = variations(seq, mid);
    stack.push_back({mid, br.hi, v_mid, br.v_hi});
    stack.push_back({br.lo, mid, br.v_lo, v_mid});
  }
}

}  // namespace

std::vector<RealRoot> real_roots(const Poly& p, double a, double b, double tol) {
  if (!(a < b)) throw std::invalid_argument("real_roots: require a < b");
  if (p.degree() <= 0) return {};
  const Poly g = p.is_real() ? p : gcd(p.real_part(), p.imag_part());
  if (g.degree() <= 0) return {};

  const mpq_class lo(a), hi(b), eps(tol);
  std::vector<RealRoot> out;
  for (const auto& [factor, mult] : square_free_decomposition(g)) {
    std::vector<double> roots;
    isolate(factor, lo, hi, eps, roots);
    for (double r : roots) out.push_back({r, mult});
  }
  std::sort(out.begin(), out.end(), [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
  return out;
}

double root_bound(const Poly& p) {
  if (p.degree() <= 0) return 0.0;
  const double lead = std::abs(p.leading().to_complex());
  double m = 0.0;
  for (int j = 0; j < p.degree(); ++j) m = std::max(m, std::abs(p.coeff(j).to_complex()) / lead);
  return 1.0 + m;
}

}  // namespace psi_spectral

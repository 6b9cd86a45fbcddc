#include "psi_spectral/diff_operator.hpp"

#include <algorithm>
#include <sstream>

#include "psi_spectral/errors.hpp"

namespace psi_spectral {

DiffOperator::DiffOperator(std::vector<Poly> coeffs, Poly lcm_den)
    : coeffs_(std::move(coeffs)), lcm_den_(std::move(lcm_den)) {
  if (coeffs_.empty()) coeffs_.emplace_back();
  if (coeffs_.back().is_zero() && coeffs_.size() > 1)
    throw PreconditionError("invalid operator: leading coefficient p_" +
                            std::to_string(coeffs_.size() - 1) + " is zero");
  if (lcm_den_.is_zero()) throw PreconditionError("invalid operator: l(x) is zero");
}

bool DiffOperator::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Poly& p) { return p.is_zero(); });
}

std::string DiffOperator::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int m = order(); m >= 0; --m) {
    const Poly& p = coeffs_[static_cast<std::size_t>(m)];
    if (p.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << '(' << p.to_string() << ')';
    if (m == 1) os << "*D";
    if (m > 1) os << "*D^" << m;
  }
  if (first) os << '0';
  return os.str();
}

RationalDiffOperator::RationalDiffOperator(std::vector<RationalFunction> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.emplace_back();
  if (coeffs_.back().is_zero() && coeffs_.size() > 1)
    throw PreconditionError("invalid operator: leading coefficient r_" +
                            std::to_string(coeffs_.size() - 1) + " is zero");
}

DiffOperator clear_denominators(const RationalDiffOperator& r, const GaussianRational& lambda) {
  Poly l = Poly::constant(1);
  for (const auto& c : r.coeffs()) l = lcm(l, c.den());

  std::vector<Poly> p;
  p.reserve(r.coeffs().size());
  for (const auto& c : r.coeffs()) p.push_back(c.num() * divmod(l, c.den()).first);
  if (!lambda.is_zero()) p[0] -= l * lambda;
  return DiffOperator(std::move(p), std::move(l));
}

int s0(const DiffOperator& p) {
  bool any = false;
  int best = 0;
  for (int m = 0; m <= p.order(); ++m) {
    const Poly& c = p.coeff(m);
    if (c.is_zero()) continue;
    const int v = c.degree() - m;
    best = any ? std::max(best, v) : v;
    any = true;
  }
  return best;
}

std::vector<RealRoot> singular_points(const DiffOperator& p, double a, double b, double tol) {
  return real_roots(p.leading(), a, b, tol);
}

std::vector<RealRoot> all_singular_points(const DiffOperator& p, double tol) {
  const Poly& lead = p.leading();
  if (lead.degree() <= 0) return {};
  const double bound = root_bound(lead) + 1.0;
  return real_roots(lead, -bound, bound, tol);
}

std::vector<MonomialTerm> monomial_terms(const DiffOperator& p) {
  std::vector<MonomialTerm> out;
  for (int m = 0; m <= p.order(); ++m) {
    const Poly& c = p.coeff(m);
    for (int j = c.degree(); j >= 0; --j) {
      GaussianRational a = c.coeff(j);
      if (!a.is_zero()) out.push_back({m, j, std::move(a)});
    }
  }
  return out;
}

}  // namespace psi_spectral

#include "psi_spectral/ode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "psi_spectral/errors.hpp"

namespace psi_spectral {

StandardForm::StandardForm(const DiffOperator& p, double root_tol) {
  if (p.order() < 1) throw PreconditionError("standard form needs an operator of order >= 1");
  for (const auto& c : p.coeffs()) coeffs_.emplace_back(c);
  for (const auto& c : p.leading().coeffs()) lead_abs_.push_back(std::abs(c.to_complex()));
  singular_ = all_singular_points(p, root_tol);
  Interval current;
  for (const auto& s : singular_) {
    current.hi = s.value;
    intervals_.push_back(current);
    current = Interval{s.value, std::numeric_limits<double>::infinity()};
  }
  intervals_.push_back(current);
}

bool StandardForm::regular_on(double a, double b) const {
  const double lo = std::min(a, b), hi = std::max(a, b);
  for (const auto& s : singular_)
    if (s.value >= lo && s.value <= hi) return false;
  return true;
}

Eigen::VectorXcd StandardForm::apply(double x, const Eigen::VectorXcd& v) const {
  const int m = dimension();
  const Complex lead = coeffs_.back()(x);
  double scale = 0.0, power = 1.0;
  for (double c : lead_abs_) {
    scale += c * power;
    power *= std::abs(x);
  }
  if (std::abs(lead) < 1e-12 * scale)
    throw DomainError("standard form is singular at x = " + std::to_string(x));
  Eigen::VectorXcd out(m);
  for (int i = 0; i + 1 < m; ++i) out(i) = v(i + 1);
  Complex acc = 0.0;
  for (int l = 0; l < m; ++l) acc -= coeffs_[static_cast<std::size_t>(l)](x) * v(l);
  out(m - 1) = acc / lead;
  return out;
}

Eigen::MatrixXcd StandardForm::matrix(double x) const {
  const int m = dimension();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (int l = 0; l < m; ++l) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(m);
    e(l) = 1.0;
    a.col(l) = apply(x, e);
  }
  return a;
}

Trajectory integrate(const StandardForm& sf, double x0, const Eigen::VectorXcd& v0, double x1, int steps) {
  if (steps < 1) throw PreconditionError("integration needs at least one step");
  if (v0.size() != sf.dimension()) throw PreconditionError("initial state has the wrong dimension");
  if (!sf.regular_on(x0, x1))
    throw DomainError("integration interval [" + std::to_string(x0) + ", " + std::to_string(x1) +
                      "] contains a singular point");
  Trajectory t;
  t.x.reserve(static_cast<std::size_t>(steps) + 1);
  t.state.reserve(static_cast<std::size_t>(steps) + 1);
  const double h = (x1 - x0) / steps;
  Eigen::VectorXcd v = v0;
  t.x.push_back(x0);
  t.state.push_back(v);
  for (int i = 0; i < steps; ++i) {
    const double x = x0 + i * h;
    const Eigen::VectorXcd k1 = sf.apply(x, v);
    const Eigen::VectorXcd k2 = sf.apply(x + h / 2, v + (h / 2) * k1);
    const Eigen::VectorXcd k3 = sf.apply(x + h / 2, v + (h / 2) * k2);
    const Eigen::VectorXcd k4 = sf.apply(x + h, v + h * k3);
    v += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t.x.push_back(i + 1 == steps ? x1 : x0 + (i + 1) * h);
    t.state.push_back(v);
  }
  return t;
}

CrosscheckReport crosscheck(const ReconstructedFunction& f, const DiffOperator& p, double a, double b, int steps,
                            Trajectory* trajectory) {
  const StandardForm sf(p);
  const int m = sf.dimension();
  if (f.max_order() < m - 1) throw PreconditionError("reconstruction lacks the derivatives needed to seed the oracle");
  Eigen::VectorXcd v0(m);
  for (int r = 0; r < m; ++r) v0(r) = f.eval_derivative(r, a);
  const Trajectory t = integrate(sf, a, v0, b, steps);
  CrosscheckReport rep;
  rep.samples = static_cast<int>(t.x.size());
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const double d = std::abs(t.state[i](0) - f.eval(t.x[i]));
    if (d > rep.max_deviation) {
      rep.max_deviation = d;
      rep.at_x = t.x[i];
    }
  }
  if (trajectory) *trajectory = t;
  return rep;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  const Eigen::Index m = t.state.empty() ? 0 : t.state.front().size();
  os << 'x';
  for (Eigen::Index i = 0; i < m; ++i) os << ",re_v" << i << ",im_v" << i;
  os << '\n';
  char buf[64];
  for (std::size_t k = 0; k < t.x.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", t.x[k]);
    os << buf;
    for (Eigen::Index i = 0; i < m; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", t.state[k](i).real(), t.state[k](i).imag());
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace psi_spectral

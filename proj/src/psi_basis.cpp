#include "psi_spectral/psi_basis.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "psi_spectral/errors.hpp"

namespace psi_spectral {

Complex eval_psi(BasisIndex idx, double x) {
  const double alpha = std::atan2(1.0, x);
  const double modulus = std::pow(std::hypot(x, 1.0), -static_cast<double>(idx.k + 1));
  const double phase = -static_cast<double>(idx.k + 1 + 2 * static_cast<long>(idx.n_dot)) * alpha;
  return std::polar(modulus, phase);
}

Complex eval_psi_theta(BasisIndex idx, double theta) {
  if (!(std::abs(theta) < std::numbers::pi))
    throw DomainError("theta must lie in (-pi, pi), got " + std::to_string(theta));
  const double sign = (idx.n_dot % 2 == 0) ? 1.0 : -1.0;
  return std::polar(sign / std::numbers::sqrt2, idx.n_dot * theta);
}

Complex theta_factor(int k, double theta) {
  if (!(std::abs(theta) < std::numbers::pi))
    throw DomainError("theta must lie in (-pi, pi), got " + std::to_string(theta));
  const double sec = 1.0 / std::cos(theta / 2.0);
  const double modulus = std::pow(std::abs(sec), k + 1) / std::numbers::sqrt2;
  return std::polar(modulus, -(k + 1) * (theta - std::numbers::pi) / 2.0);
}

ThetaQuadrature::ThetaQuadrature(int nodes) {
  if (nodes < 1) throw std::invalid_argument("quadrature needs at least one node");
  const auto n = static_cast<std::size_t>(nodes);
  theta_.resize(n);
  x_.resize(n);
  w_.resize(n);

  // Legendre roots on (-1, 1) by Newton from the Chebyshev-like initial guess.
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= nodes; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = nodes * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    theta_[i] = -std::numbers::pi * z;
    theta_[n - 1 - i] = std::numbers::pi * z;
    w_[i] = w_[n - 1 - i] = std::numbers::pi * w;
  }
  if (n % 2 == 1) theta_[half - 1] = 0.0;
  for (std::size_t i = 0; i < n; ++i) x_[i] = std::tan(theta_[i] / 2.0);
}

Complex ThetaQuadrature::inner_product(int k, std::span<const Complex> f, std::span<const Complex> g) const {
  if (f.size() != x_.size() || g.size() != x_.size())
    throw std::invalid_argument("inner_product: sample count does not match node count");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double weight = 0.5 * w_[i] * std::pow(x_[i] * x_[i] + 1.0, k + 1);
    acc += weight * f[i] * std::conj(g[i]);
  }
  return acc;
}

Complex ThetaQuadrature::inner_product(int k, const std::function<Complex(double)>& f,
                                       const std::function<Complex(double)>& g) const {
  std::vector<Complex> fv(x_.size()), gv(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    fv[i] = f(x_[i]);
    gv[i] = g(x_[i]);
  }
  return inner_product(k, fv, gv);
}

const ThetaQuadrature& theta_quadrature(int nodes) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<ThetaQuadrature>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nodes];
  if (!slot) slot = std::make_unique<ThetaQuadrature>(nodes);
  return *slot;
}

Complex weighted_inner_product(int k, const std::function<Complex(double)>& f,
                               const std::function<Complex(double)>& g, int nodes) {
  return theta_quadrature(nodes).inner_product(k, f, g);
}

}  // namespace psi_spectral

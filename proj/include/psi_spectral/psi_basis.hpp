#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace psi_spectral {

using Complex = std::complex<double>;

/// Subscripts of psi_{k, n_dot}: weight level k and bilateral index n_dot.
struct BasisIndex {
  int k = 0;
  int n_dot = 0;
  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Integer floor division (rounds toward negative infinity).
constexpr int floor_div(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

/// Bilateral index matched to unilateral n at level k:
/// floor(-(k+1)/2) + (-1)^(n+k+1) floor((n+1)/2). A bijection Z+ -> Z for fixed k.
constexpr int bilateral_index(int k, int n) {
  const int center = floor_div(-(k + 1), 2);
  const int magnitude = (n + 1) / 2;
  const bool positive = ((n + k + 1) % 2 + 2) % 2 == 0;
  return center + (positive ? magnitude : -magnitude);
}

/// Inverse of bilateral_index for fixed k.
constexpr int unilateral_index(int k, int n_dot) {
  const int d = n_dot - floor_div(-(k + 1), 2);
  if (d == 0) return 0;
  const int t = d < 0 ? -d : d;
  const bool k_even = (k % 2 + 2) % 2 == 0;
  // n = 2t-1 carries sign (-1)^k, n = 2t carries (-1)^(k+1).
  return ((d > 0) == k_even) ? 2 * t - 1 : 2 * t;
}

/// psi_{k,n_dot}(x) = (x+i)^{-(k+1)} ((x-i)/(x+i))^{n_dot}, evaluated in polar
/// form: modulus (x^2+1)^{-(k+1)/2}, phase -(k+1+2 n_dot) * atan2(1, x).
Complex eval_psi(BasisIndex idx, double x);

/// Fourier-side form (-1)^{n_dot} e^{i n_dot theta} / sqrt(2). Throws DomainError for |theta| >= pi.
Complex eval_psi_theta(BasisIndex idx, double theta);

/// Factor mapping a value f(x) at x = tan(theta/2) to its theta-side image at level k:
/// f~(theta) = theta_factor(k, theta) * f(tan(theta/2)).
Complex theta_factor(int k, double theta);

/// Gauss-Legendre rule in theta over (-pi, pi), with the matching x = tan(theta/2) nodes.
class ThetaQuadrature {
 public:
  explicit ThetaQuadrature(int nodes);

  int size() const noexcept { return static_cast<int>(theta_.size()); }
  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& weights() const noexcept { return w_; }

  /// <f, g>_(k) from samples of f and g at the x-nodes.
  Complex inner_product(int k, std::span<const Complex> f, std::span<const Complex> g) const;
  Complex inner_product(int k, const std::function<Complex(double)>& f,
                        const std::function<Complex(double)>& g) const;

 private:
  std::vector<double> theta_;
  std::vector<double> x_;
  std::vector<double> w_;
};

/// Shared, lazily built rule for a given node count.
const ThetaQuadrature& theta_quadrature(int nodes);

/// <f, g>_(k) = int f conj(g) (x^2+1)^k dx by Gauss-Legendre in theta = 2 arctan x.
Complex weighted_inner_product(int k, const std::function<Complex(double)>& f,
                               const std::function<Complex(double)>& g, int nodes);

}  // namespace psi_spectral

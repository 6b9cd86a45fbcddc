#pragma once

#include <complex>
#include <map>
#include <string>

#include "psi_spectral/diff_operator.hpp"
#include "psi_spectral/errors.hpp"
#include "psi_spectral/psi_basis.hpp"
#include "psi_spectral/rational.hpp"

namespace psi_spectral {

namespace detail {

template <class T>
struct ComboScalar;

template <>
struct ComboScalar<GaussianRational> {
  static GaussianRational make(long re_num, long im_num, long den) {
    return {Rational(re_num, den), Rational(im_num, den)};
  }
  static GaussianRational from(const GaussianRational& c) { return c; }
  static Complex to_complex(const GaussianRational& c) { return c.to_complex(); }
  static bool is_zero(const GaussianRational& c) { return c.is_zero(); }
};

template <>
struct ComboScalar<Complex> {
  static Complex make(long re_num, long im_num, long den) {
    return {static_cast<double>(re_num) / den, static_cast<double>(im_num) / den};
  }
  static Complex from(const GaussianRational& c) { return c.to_complex(); }
  static Complex to_complex(const Complex& c) { return c; }
  static bool is_zero(const Complex& c) { return c == Complex(0.0); }
};

}  // namespace detail

/// Finite combination sum_r c_r psi_{k, r} at a single level k.
/// Zero coefficients are never stored.
template <class T>
class BasicPsiCombo {
 public:
  using Scalar = T;
  using Traits = detail::ComboScalar<T>;

  BasicPsiCombo() = default;
  explicit BasicPsiCombo(int level) : level_(level) {}
  static BasicPsiCombo single(int level, int n_dot, T coeff = Traits::make(1, 0, 1)) {
    BasicPsiCombo c(level);
    c.add(n_dot, coeff);
    return c;
  }

  int level() const noexcept { return level_; }
  const std::map<int, T>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  T coeff(int n_dot) const {
    auto it = terms_.find(n_dot);
    return it == terms_.end() ? T{} : it->second;
  }
  int min_index() const { return terms_.begin()->first; }
  int max_index() const { return terms_.rbegin()->first; }

  void add(int n_dot, const T& value) {
    if (Traits::is_zero(value)) return;
    auto [it, inserted] = terms_.try_emplace(n_dot, value);
    if (!inserted) {
      it->second += value;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  BasicPsiCombo& operator+=(const BasicPsiCombo& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) level_ = o.level_;
    if (o.level_ != level_)
      throw PreconditionError("cannot add combinations at levels " + std::to_string(level_) + " and " +
                              std::to_string(o.level_));
    for (const auto& [r, c] : o.terms_) add(r, c);
    return *this;
  }

  BasicPsiCombo& operator*=(const T& a) {
    if (Traits::is_zero(a)) {
      terms_.clear();
      return *this;
    }
    for (auto& [r, c] : terms_) c *= a;
    return *this;
  }

  friend BasicPsiCombo operator*(const T& a, BasicPsiCombo c) { return c *= a; }

  Complex eval(double x) const {
    Complex acc = 0.0;
    for (const auto& [r, c] : terms_) acc += Traits::to_complex(c) * eval_psi({level_, r}, x);
    return acc;
  }

  friend bool operator==(const BasicPsiCombo& a, const BasicPsiCombo& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.level_ == b.level_ && a.terms_ == b.terms_;
  }

 private:
  int level_ = 0;
  std::map<int, T> terms_;
};

using PsiCombo = BasicPsiCombo<GaussianRational>;

/// psi_{k,r} = -(i/2)(psi_{k-1,r} - psi_{k-1,r+1}); level drops by one.
template <class T>
BasicPsiCombo<T> lower_identity(const BasicPsiCombo<T>& c) {
  using Tr = detail::ComboScalar<T>;
  const T minus_half_i = Tr::make(0, -1, 2);
  const T half_i = Tr::make(0, 1, 2);
  BasicPsiCombo<T> out(c.level() - 1);
  for (const auto& [r, a] : c.terms()) {
    out.add(r, a * minus_half_i);
    out.add(r + 1, a * half_i);
  }
  return out;
}

/// x psi_{k,r} = (psi_{k-1,r} + psi_{k-1,r+1}) / 2.
template <class T>
BasicPsiCombo<T> lower_mult_x(const BasicPsiCombo<T>& c) {
  const T half = detail::ComboScalar<T>::make(1, 0, 2);
  BasicPsiCombo<T> out(c.level() - 1);
  for (const auto& [r, a] : c.terms()) {
    const T h = a * half;
    out.add(r, h);
    out.add(r + 1, h);
  }
  return out;
}

/// d/dx psi_{k,r} = r psi_{k+1,r-1} - (r+k+1) psi_{k+1,r}.
template <class T>
BasicPsiCombo<T> raise_diff(const BasicPsiCombo<T>& c) {
  using Tr = detail::ComboScalar<T>;
  const int k = c.level();
  BasicPsiCombo<T> out(k + 1);
  for (const auto& [r, a] : c.terms()) {
    out.add(r - 1, a * Tr::make(r, 0, 1));
    out.add(r, a * Tr::make(-(static_cast<long>(r) + k + 1), 0, 1));
  }
  return out;
}

/// x^j (d/dx)^m psi_{k0, n_dot} expressed at level k_diamond.
/// Differentiations first, then multiplications by x, then identity lowerings.
template <class T = GaussianRational>
BasicPsiCombo<T> expand_monomial_action(int j, int m, int k0, int n_dot, int k_diamond) {
  if (j < 0 || m < 0) throw PreconditionError("monomial powers must be nonnegative");
  if (k_diamond > k0 + m - j)
    throw PreconditionError("level mismatch: x^" + std::to_string(j) + " D^" + std::to_string(m) +
                            " from level " + std::to_string(k0) + " needs k_diamond <= " +
                            std::to_string(k0 + m - j) + ", got " + std::to_string(k_diamond));
  auto c = BasicPsiCombo<T>::single(k0, n_dot);
  for (int i = 0; i < m; ++i) c = raise_diff(c);
  for (int i = 0; i < j; ++i) c = lower_mult_x(c);
  while (c.level() > k_diamond) c = lower_identity(c);
  return c;
}

/// P psi_{k0, n_dot} at level k_diamond. Requires k_diamond <= k0 - s0(P).
template <class T = GaussianRational>
BasicPsiCombo<T> apply_operator(const DiffOperator& p, int k0, int n_dot, int k_diamond) {
  const int bound = k0 - s0(p);
  if (k_diamond > bound)
    throw PreconditionError("k_diamond must satisfy k_diamond <= k0 - s0 = " + std::to_string(bound) +
                            ", got " + std::to_string(k_diamond));
  BasicPsiCombo<T> out(k_diamond);
  for (const auto& term : monomial_terms(p)) {
    auto part = expand_monomial_action<T>(term.j, term.m, k0, n_dot, k_diamond);
    part *= detail::ComboScalar<T>::from(term.coeff);
    out += part;
  }
  return out;
}

}  // namespace psi_spectral

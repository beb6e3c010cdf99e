#pragma once

#include <utility>
#include <vector>

#include "aat/errors.hpp"

namespace aat {

/// Dense univariate polynomial over a field F.  F needs +, -, *, /, unary -
/// and is_zero().  Coefficients are stored lowest degree first without
/// trailing zeros.  A zero of F is carried along because field elements may
/// need context (a ring, a modulus) to be constructed.
template <class F>
class UPoly {
 public:
  explicit UPoly(F zero) : zero_(std::move(zero)) {}
  UPoly(F zero, std::vector<F> coeffs) : zero_(std::move(zero)), c_(std::move(coeffs)) { trim(); }

  static UPoly constant(const F& zero, const F& c) { return UPoly(zero, {c}); }
  /// c * t^k
  static UPoly monomial(const F& zero, const F& c, int k) {
    std::vector<F> v(k + 1, zero);
    v[k] = c;
    return UPoly(zero, std::move(v));
  }

  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const F& coeff(int i) const { return i >= 0 && i < int(c_.size()) ? c_[i] : zero_; }
  const F& leading() const { return c_.empty() ? zero_ : c_.back(); }
  const std::vector<F>& coeffs() const { return c_; }
  const F& zero() const { return zero_; }

  UPoly& operator+=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    trim();
    return *this;
  }
  UPoly& operator-=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), zero_);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    trim();
    return *this;
  }
  UPoly operator-() const {
    UPoly r(zero_);
    for (const auto& c : c_) r.c_.push_back(-c);
    return r;
  }
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly(a.zero_);
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, a.zero_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    }
    return UPoly(a.zero_, std::move(r));
  }

  UPoly scaled(const F& s) const {
    std::vector<F> r;
    r.reserve(c_.size());
    for (const auto& c : c_) r.push_back(c * s);
    return UPoly(zero_, std::move(r));
  }
  UPoly monic() const {
    if (is_zero()) return *this;
    std::vector<F> r;
    r.reserve(c_.size());
    F lc = leading();
    for (const auto& c : c_) r.push_back(c / lc);
    return UPoly(zero_, std::move(r));
  }

  template <class E>
  E evaluate(const E& t, const E& zero) const {
    E acc = zero;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + E(*it);
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  F zero_;
  std::vector<F> c_;
};

/// (q, r) with a = q b + r and deg r < deg b.
template <class F>
std::pair<UPoly<F>, UPoly<F>> divmod(const UPoly<F>& a, const UPoly<F>& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  const F& z = a.zero();
  UPoly<F> r = a;
  std::vector<F> q(std::max(0, a.degree() - b.degree() + 1), z);
  const F lc = b.leading();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int k = r.degree() - b.degree();
    F c = r.leading() / lc;
    q[k] = c;
    r -= UPoly<F>::monomial(z, c, k) * b;
  }
  return {UPoly<F>(z, std::move(q)), std::move(r)};
}

/// Monic gcd; gcd(0, 0) = 0.
template <class F>
UPoly<F> gcd(UPoly<F> a, UPoly<F> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class F>
struct ExtGcd {
  UPoly<F> g, s, t;  // s a + t b = g, g monic
};

template <class F>
ExtGcd<F> ext_gcd(const UPoly<F>& a, const UPoly<F>& b) {
  const F& z = a.zero();
  if (a.is_zero() && b.is_zero()) return {a, a, a};
  F one = a.is_zero() ? b.leading() / b.leading() : a.leading() / a.leading();
  UPoly<F> r0 = a, r1 = b;
  UPoly<F> s0 = UPoly<F>::constant(z, one), s1(z);
  UPoly<F> t0(z), t1 = UPoly<F>::constant(z, one);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    UPoly<F> s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  F inv = one / r0.leading();
  return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

}  // namespace aat

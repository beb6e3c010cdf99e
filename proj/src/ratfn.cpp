#include "aat/ratfn.hpp"

#include "aat/errors.hpp"
#include "aat/poly_algo.hpp"

namespace aat {

RatFn::RatFn(RingPtr ring) : num_(ring), den_(MPoly::constant(ring, Rat(1))) {}

RatFn::RatFn(const MPoly& num) : num_(num), den_(MPoly::constant(num.ring(), Rat(1))) {}

RatFn::RatFn(const MPoly& num, const MPoly& den) : num_(num), den_(den) {
  require_same_ring(num, den);
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
  normalize();
}

RatFn RatFn::constant(RingPtr ring, const Rat& c) { return RatFn(MPoly::constant(std::move(ring), c)); }

void RatFn::normalize() {
  if (num_.is_zero()) {
    den_ = MPoly::constant(num_.ring(), Rat(1));
    return;
  }
  if (!den_.is_constant()) {
    MPoly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact_quotient(num_, g);
      den_ = exact_quotient(den_, g);
    }
  }
  Rat lc = den_.leading_coefficient();
  if (lc != 1) {
    num_ = num_.scaled(Rat(1) / lc);
    den_ = den_.scaled(Rat(1) / lc);
  }
}

RatFn& RatFn::operator+=(const RatFn& o) {
  if (o.is_zero()) return *this;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_constant()) normalize();
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RatFn& RatFn::operator-=(const RatFn& o) { return *this += -o; }

RatFn& RatFn::operator*=(const RatFn& o) {
  if (is_polynomial() && o.is_polynomial()) {
    num_ *= o.num_;
    return *this;
  }
  // Cross-cancel first to keep the products small.
  MPoly g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
  MPoly a = g1.is_constant() ? num_ : exact_quotient(num_, g1);
  MPoly d2 = g1.is_constant() ? o.den_ : exact_quotient(o.den_, g1);
  MPoly b = g2.is_constant() ? o.num_ : exact_quotient(o.num_, g2);
  MPoly d1 = g2.is_constant() ? den_ : exact_quotient(den_, g2);
  num_ = a * b;
  den_ = d1 * d2;
  Rat lc = den_.leading_coefficient();
  if (num_.is_zero()) {
    den_ = MPoly::constant(num_.ring(), Rat(1));
  } else if (lc != 1) {
    num_ = num_.scaled(Rat(1) / lc);
    den_ = den_.scaled(Rat(1) / lc);
  }
  return *this;
}

RatFn RatFn::inverse() const {
  if (num_.is_zero()) throw DomainError("inverse of the zero rational function");
  return RatFn(den_, num_);
}

RatFn& RatFn::operator/=(const RatFn& o) { return *this *= o.inverse(); }

std::string wrap_term(const MPoly& p) {
  if (p.size() <= 1) return p.to_string();
  return "(" + p.to_string() + ")";
}

std::string RatFn::to_string() const {
  if (is_polynomial()) return num_.to_string();
  return wrap_term(num_) + "/" + wrap_term(den_);
}

RatFn derivative(const RatFn& f, std::size_t symbol) {
  if (f.is_polynomial()) return RatFn(derivative(f.num(), symbol));
  MPoly n = derivative(f.num(), symbol) * f.den() - f.num() * derivative(f.den(), symbol);
  return RatFn(n, f.den() * f.den());
}

RatFn compose(const MPoly& p, std::size_t symbol, const RatFn& value) {
  if (!p.contains(symbol)) return RatFn(p);
  if (value.is_polynomial()) return RatFn(compose(p, symbol, value.num()));
  // Homogenize: sum c_k num^k den^(d-k) / den^d.
  auto c = coefficients_in(p, symbol);
  int d = int(c.size()) - 1;
  MPoly acc(p.ring());
  std::vector<MPoly> npow{MPoly::constant(p.ring(), Rat(1))};
  for (int k = 1; k <= d; ++k) npow.push_back(npow.back() * value.num());
  MPoly dpow = MPoly::constant(p.ring(), Rat(1));
  for (int k = d; k >= 0; --k) {
    acc += c[k] * npow[k] * dpow;
    if (k > 0) dpow *= value.den();
  }
  return RatFn(acc, dpow);
}

RatFn compose(const RatFn& f, std::size_t symbol, const RatFn& value) {
  RatFn n = compose(f.num(), symbol, value);
  if (f.is_polynomial()) return n;
  return n / compose(f.den(), symbol, value);
}

std::complex<double> evaluate(const RatFn& f, std::span<const std::complex<double>> values) {
  auto d = evaluate(f.den(), values).value;
  if (std::abs(d) < kPoleThreshold) throw PoleError("denominator vanishes at the evaluation point");
  return evaluate(f.num(), values).value / d;
}

}  // namespace aat

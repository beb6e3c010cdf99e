#pragma once

#include <complex>
#include <span>
#include <string>

#include "aat/mpoly.hpp"

namespace aat {

/// Numeric denominators below this magnitude are treated as poles.
inline constexpr double kPoleThreshold = 1e-300;

/// Reduced quotient of polynomials; the denominator has leading coefficient 1.
class RatFn {
 public:
  explicit RatFn(RingPtr ring);
  RatFn(const MPoly& num);  // NOLINT: polynomials convert implicitly
  RatFn(const MPoly& num, const MPoly& den);

  static RatFn constant(RingPtr ring, const Rat& c);

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  const RingPtr& ring() const { return num_.ring(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool contains(std::size_t symbol) const { return num_.contains(symbol) || den_.contains(symbol); }

  RatFn& operator+=(const RatFn& o);
  RatFn& operator-=(const RatFn& o);
  RatFn& operator*=(const RatFn& o);
  RatFn& operator/=(const RatFn& o);
  RatFn operator-() const { return RatFn(-num_, den_, Normalized{}); }
  RatFn inverse() const;

  friend RatFn operator+(RatFn a, const RatFn& b) { return a += b; }
  friend RatFn operator-(RatFn a, const RatFn& b) { return a -= b; }
  friend RatFn operator*(RatFn a, const RatFn& b) { return a *= b; }
  friend RatFn operator/(RatFn a, const RatFn& b) { return a /= b; }
  friend bool operator==(const RatFn& a, const RatFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// `num` alone for polynomials, otherwise `(num)/(den)` with parentheses
  /// dropped around single-term parts.
  std::string to_string() const;

 private:
  struct Normalized {};
  RatFn(MPoly num, MPoly den, Normalized) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  MPoly num_;
  MPoly den_;
};

RatFn derivative(const RatFn& f, std::size_t symbol);
/// Replaces `symbol` by a rational function.
RatFn compose(const RatFn& f, std::size_t symbol, const RatFn& value);
RatFn compose(const MPoly& p, std::size_t symbol, const RatFn& value);

/// Numeric value; throws PoleError when |den| < kPoleThreshold.
std::complex<double> evaluate(const RatFn& f, std::span<const std::complex<double>> values);

/// Wraps multi-term polynomial text in parentheses.
std::string wrap_term(const MPoly& p);

}  // namespace aat

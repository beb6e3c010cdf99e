#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aat/rat.hpp"
#include "aat/ring.hpp"

namespace aat {

inline constexpr std::size_t kMaxSymbols = 48;

/// Exponent vector over a ring's symbols. Byte-wise comparison of the array
/// is exactly lexicographic order in ring-declaration order.
struct Monomial {
  std::array<std::uint8_t, kMaxSymbols> exp{};

  unsigned degree(std::size_t i) const { return exp[i]; }
  unsigned total_degree() const;
  bool is_one() const;
  bool divides(const Monomial& other) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }
};

/// <0 when a sorts after b in canonical (descending lex) order.
inline int lex_compare(const Monomial& a, const Monomial& b) {
  return std::memcmp(a.exp.data(), b.exp.data(), kMaxSymbols);
}

Monomial operator*(const Monomial& a, const Monomial& b);
/// Requires b | a.
Monomial operator/(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rat coeff;
};

/// Sparse multivariate polynomial over Q, terms kept in descending lex order
/// with no zero coefficients. Parameters are ordinary symbols of the ring.
class MPoly {
 public:
  explicit MPoly(RingPtr ring);

  static MPoly constant(RingPtr ring, const Rat& c);
  static MPoly symbol(RingPtr ring, std::size_t index);
  static MPoly symbol(RingPtr ring, std::string_view name);
  static MPoly monomial(RingPtr ring, const Monomial& m, const Rat& c);
  /// Sorts, merges duplicates and drops zeros.
  static MPoly from_terms(RingPtr ring, std::vector<Term> terms);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Rational value for constant polynomials (zero included).
  Rat constant_value() const;
  bool is_one() const;

  const Term& leading_term() const;
  const Rat& leading_coefficient() const { return leading_term().coeff; }

  /// Degree in one symbol; -1 for the zero polynomial.
  int degree(std::size_t symbol) const;
  int degree(std::string_view symbol) const;
  int total_degree() const;
  bool contains(std::size_t symbol) const;
  bool contains(std::string_view symbol) const;
  /// Lowest-index symbol appearing in the polynomial, or ring size if constant.
  std::size_t first_symbol() const;
  std::vector<std::size_t> symbols_used() const;

  MPoly& operator+=(const MPoly& other);
  MPoly& operator-=(const MPoly& other);
  MPoly& operator*=(const MPoly& other);
  MPoly operator-() const;
  MPoly scaled(const Rat& c) const;
  MPoly times_monomial(const Monomial& m, const Rat& c) const;

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend bool operator==(const MPoly& a, const MPoly& b);

  /// Canonical text, e.g. `theta^2 - 4*x1^3 + g2*x1 + g3`.
  std::string to_string() const;

 private:
  RingPtr ring_;
  std::vector<Term> terms_;
};

void require_same_ring(const MPoly& a, const MPoly& b);

/// Nonnegative integer power. Negative exponents throw DomainError.
MPoly pow(const MPoly& p, long exponent);

MPoly derivative(const MPoly& p, std::size_t symbol);
MPoly derivative(const MPoly& p, std::string_view symbol);

/// Coefficients of p viewed as a polynomial in `symbol`; index = power.
std::vector<MPoly> coefficients_in(const MPoly& p, std::size_t symbol);
MPoly from_coefficients(const std::vector<MPoly>& coeffs, std::size_t symbol, const RingPtr& ring);
MPoly coefficient_of(const MPoly& p, std::size_t symbol, int power);
MPoly leading_coefficient_in(const MPoly& p, std::size_t symbol);

/// p with `symbol` replaced by `value` (same ring).
MPoly compose(const MPoly& p, std::size_t symbol, const MPoly& value);
MPoly substitute_value(const MPoly& p, std::size_t symbol, const Rat& value);

/// Relabels symbols: symbol i of p becomes symbol mapping[i] (same ring).
MPoly permute_symbols(const MPoly& p, std::span<const std::size_t> mapping);
/// Moves p into another ring by symbol name; throws if a used symbol is missing.
MPoly embed(const MPoly& p, const RingPtr& target);

/// Exact multivariate division; empty optional when b does not divide a.
std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b);
/// Throws DomainError if the division is not exact.
MPoly exact_quotient(const MPoly& a, const MPoly& b);

/// Integer coefficients with gcd 1 and positive leading coefficient.
MPoly primitive_integer(const MPoly& p);
/// Leading coefficient 1.
MPoly monic(const MPoly& p);

struct NumericValue {
  std::complex<double> value;
  double max_term = 0.0;  // largest |term| encountered, for residual scaling
};

/// Numeric evaluation with one complex value per ring symbol.
NumericValue evaluate(const MPoly& p, std::span<const std::complex<double>> values);

}  // namespace aat

#pragma once

#include <memory>

#include "aat/ratfn.hpp"
#include "aat/upoly.hpp"

namespace aat {

/// The algebra K = Q(x, params)[t] / (V) for a polynomial V of positive
/// degree in the generator t.  It is a field when V is irreducible; inverses
/// of zero divisors throw DomainError.
struct ExtensionContext {
  RingPtr ring;
  std::size_t generator;
  UPoly<RatFn> modulus;  // monic in the generator
};
using ExtensionPtr = std::shared_ptr<const ExtensionContext>;

ExtensionPtr make_extension(const MPoly& V, std::size_t generator);

/// Element of K kept as a polynomial in the generator of degree < deg V.
class ExtElem {
 public:
  ExtElem(ExtensionPtr ctx, UPoly<RatFn> rep);

  static ExtElem zero(const ExtensionPtr& ctx);
  static ExtElem from(const ExtensionPtr& ctx, const RatFn& f);

  const ExtensionPtr& context() const { return ctx_; }
  const UPoly<RatFn>& rep() const { return rep_; }
  bool is_zero() const { return rep_.is_zero(); }

  ExtElem inverse() const;
  /// Back to a rational function in the generator and x.
  RatFn to_ratfn() const;

  friend ExtElem operator+(const ExtElem& a, const ExtElem& b);
  friend ExtElem operator-(const ExtElem& a, const ExtElem& b);
  friend ExtElem operator*(const ExtElem& a, const ExtElem& b);
  friend ExtElem operator/(const ExtElem& a, const ExtElem& b) { return a * b.inverse(); }
  ExtElem operator-() const { return ExtElem(ctx_, -rep_); }

 private:
  ExtensionPtr ctx_;
  UPoly<RatFn> rep_;
};

/// f as a polynomial in `symbol` with rational-function coefficients.
UPoly<RatFn> to_upoly(const MPoly& f, std::size_t symbol);

/// p as a polynomial in `symbol` with coefficients mapped into K.
UPoly<ExtElem> lift(const MPoly& p, std::size_t symbol, const ExtensionPtr& ctx);

}  // namespace aat

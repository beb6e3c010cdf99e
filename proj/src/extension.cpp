#include "aat/extension.hpp"

#include "aat/errors.hpp"

namespace aat {

UPoly<RatFn> to_upoly(const MPoly& f, std::size_t symbol) {
  RatFn zero(f.ring());
  std::vector<RatFn> c;
  for (auto& m : coefficients_in(f, symbol)) c.emplace_back(m);
  return UPoly<RatFn>(zero, std::move(c));
}

ExtensionPtr make_extension(const MPoly& V, std::size_t generator) {
  auto u = to_upoly(V, generator);
  if (u.degree() < 1) throw DomainError("extension modulus must involve " + V.ring()->name(generator));
  return std::make_shared<const ExtensionContext>(ExtensionContext{V.ring(), generator, u.monic()});
}

ExtElem::ExtElem(ExtensionPtr ctx, UPoly<RatFn> rep) : ctx_(std::move(ctx)), rep_(std::move(rep)) {
  if (rep_.degree() >= ctx_->modulus.degree()) rep_ = divmod(rep_, ctx_->modulus).second;
}

ExtElem ExtElem::zero(const ExtensionPtr& ctx) { return ExtElem(ctx, UPoly<RatFn>(RatFn(ctx->ring))); }

ExtElem ExtElem::from(const ExtensionPtr& ctx, const RatFn& f) {
  ExtElem num(ctx, to_upoly(f.num(), ctx->generator));
  if (f.is_polynomial()) return num;
  return num * ExtElem(ctx, to_upoly(f.den(), ctx->generator)).inverse();
}

ExtElem ExtElem::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero in the extension");
  auto e = ext_gcd(rep_, ctx_->modulus);
  if (e.g.degree() > 0) throw DomainError("zero divisor in the extension");
  return ExtElem(ctx_, e.s);
}

RatFn ExtElem::to_ratfn() const {
  RatFn t(MPoly::symbol(ctx_->ring, ctx_->generator));
  RatFn acc(ctx_->ring);
  for (int i = rep_.degree(); i >= 0; --i) acc = acc * t + rep_.coeff(i);
  return acc;
}

ExtElem operator+(const ExtElem& a, const ExtElem& b) { return ExtElem(a.ctx_, a.rep_ + b.rep_); }
ExtElem operator-(const ExtElem& a, const ExtElem& b) { return ExtElem(a.ctx_, a.rep_ - b.rep_); }
ExtElem operator*(const ExtElem& a, const ExtElem& b) { return ExtElem(a.ctx_, a.rep_ * b.rep_); }

UPoly<ExtElem> lift(const MPoly& p, std::size_t symbol, const ExtensionPtr& ctx) {
  std::vector<ExtElem> c;
  for (auto& m : coefficients_in(p, symbol)) c.push_back(ExtElem(ctx, to_upoly(m, ctx->generator)));
  return UPoly<ExtElem>(ExtElem::zero(ctx), std::move(c));
}

}  // namespace aat

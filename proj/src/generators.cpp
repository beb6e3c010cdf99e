#include "aat/generators.hpp"

#include "aat/errors.hpp"
#include "aat/poly_algo.hpp"

namespace aat {

namespace {

// Parameter as a ring symbol when declared, otherwise its bound value.
MPoly param(const RingPtr& ring, const std::map<std::string, Rat>& params, const std::string& name) {
  if (auto i = ring->find(name); i && ring->is_parameter(*i)) return MPoly::symbol(ring, *i);
  auto it = params.find(name);
  if (it == params.end()) throw StructuralError("generator needs parameter '" + name + "'");
  return MPoly::constant(ring, it->second);
}

MPoly sym(const RingPtr& ring, const std::string& name) { return MPoly::symbol(ring, name); }

MPoly finish(const MPoly& g, const std::string& lname) {
  std::size_t l = g.ring()->index(lname);
  return primitive_integer(squarefree_part(g, l));
}

// x0^2 - (4 x1^3 - g2 x1 - g3) style curve relation.
MPoly cubic_relation(const RingPtr& ring, const MPoly& slot, const MPoly& x, const MPoly& g2, const MPoly& g3) {
  MPoly four = MPoly::constant(ring, Rat(4));
  return slot * slot - (four * pow(x, 3) - g2 * x - g3);
}

MPoly eliminate_slots(const MPoly& rel, const MPoly& g2, const MPoly& g3) {
  const RingPtr& R = rel.ring();
  MPoly x0 = sym(R, "x0"), y0 = sym(R, "y0"), x1 = sym(R, "x1"), y1 = sym(R, "y1");
  MPoly r = resultant(rel, cubic_relation(R, x0, x1, g2, g3), R->index("x0"));
  return resultant(r, cubic_relation(R, y0, y1, g2, g3), R->index("y0"));
}

MPoly weierstrass_law(const RingPtr& R, const std::map<std::string, Rat>& params) {
  MPoly g2 = param(R, params, "g2"), g3 = param(R, params, "g3");
  MPoly L = sym(R, "L1"), x = sym(R, "x1"), y = sym(R, "y1"), x0 = sym(R, "x0"), y0 = sym(R, "y0");
  MPoly four = MPoly::constant(R, Rat(4));
  MPoly rel = four * (L + x + y) * pow(x - y, 2) - pow(x0 - y0, 2);
  return finish(eliminate_slots(rel, g2, g3), "L1");
}

// phi2 = u2 - eps zeta(u1):  2(L2 - x2 - y2)(x1 - y1) + eps (x0 - y0) = 0.
MPoly zeta_law(const RingPtr& R, const std::map<std::string, Rat>& params) {
  MPoly L = sym(R, "L2"), x2 = sym(R, "x2"), y2 = sym(R, "y2");
  auto it = params.find("eps");
  Rat eps_value = it == params.end() ? Rat(1) : it->second;
  if (eps_value == 0) return L - x2 - y2;
  MPoly eps = R->find("eps") ? param(R, params, "eps") : MPoly::constant(R, eps_value);
  MPoly g2 = param(R, params, "g2"), g3 = param(R, params, "g3");
  MPoly x1 = sym(R, "x1"), y1 = sym(R, "y1"), x0 = sym(R, "x0"), y0 = sym(R, "y0");
  MPoly two = MPoly::constant(R, Rat(2));
  MPoly rel = two * (L - x2 - y2) * (x1 - y1) + eps * (x0 - y0);
  return finish(eliminate_slots(rel, g2, g3), "L2");
}

MPoly rational_law(const RingPtr& R, const MPoly& phi) {
  // Work in a private ring with the two pre-image symbols s, t.
  RingPtr W = make_ring({"L1", "x1", "y1", "s", "t"});
  auto phi_at = [&](const MPoly& arg) {
    MPoly out(W);
    auto coeffs = coefficients_in(phi, 0);
    for (std::size_t k = coeffs.size(); k-- > 0;) out = out * arg + MPoly::constant(W, coeffs[k].constant_value());
    return out;
  };
  MPoly s = MPoly::symbol(W, "s"), t = MPoly::symbol(W, "t");
  MPoly a = MPoly::symbol(W, "L1") - phi_at(s + t);
  MPoly b = MPoly::symbol(W, "x1") - phi_at(s);
  MPoly c = MPoly::symbol(W, "y1") - phi_at(t);
  MPoly r = resultant(resultant(a, c, W->index("t")), b, W->index("s"));
  return embed(finish(r, "L1"), R);
}

}  // namespace

bool has_generator(const std::string& family) {
  return family == "exp" || family == "rational" || family == "weierstrass" || family == "singular2-case1" ||
         family == "singular2-case2" || family == "singular2-case3" || family == "singular2-case4";
}

std::vector<MPoly> generate_aat(const std::string& family, const RingPtr& R,
                                const std::map<std::string, Rat>& params, const std::optional<MPoly>& phi) {
  auto additive = [&](int k) { return sym(R, l_name(k)) - sym(R, x_name(k)) - sym(R, y_name(k)); };
  auto multiplicative = [&](int k) { return sym(R, l_name(k)) - sym(R, x_name(k)) * sym(R, y_name(k)); };
  if (family == "exp") return {multiplicative(1)};
  if (family == "rational") return {rational_law(R, phi ? *phi : MPoly::symbol(make_ring({"u"}), std::size_t(0)))};
  if (family == "weierstrass") return {weierstrass_law(R, params)};
  if (family == "singular2-case1") return {additive(1), additive(2)};
  if (family == "singular2-case2") return {additive(1), multiplicative(2)};
  if (family == "singular2-case3") return {multiplicative(1), multiplicative(2)};
  if (family == "singular2-case4") return {weierstrass_law(R, params), zeta_law(R, params)};
  throw StructuralError("no addition-theorem generator for family '" + family +
                        "'; give the polynomials explicitly");
}

}  // namespace aat

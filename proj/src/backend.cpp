#include "aat/backend.hpp"

#include <cmath>
#include <limits>

#include "aat/errors.hpp"
#include "aat/parse.hpp"

namespace aat {

Laurent operator*(const Laurent& a, const Laurent& b) {
  Laurent r;
  r.low = a.low + b.low;
  // Valid up to (excluding) min(a.low + b.high, a.high + b.low).
  int high = std::min(a.low + b.high(), a.high() + b.low);
  int len = std::max(0, high - r.low);
  r.c.assign(len, Rat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size() && int(i + j) < len; ++j)
      if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

Laurent operator+(const Laurent& a, const Laurent& b) {
  Laurent r;
  r.low = std::min(a.low, b.low);
  int high = std::min(a.high(), b.high());
  r.c.assign(std::max(0, high - r.low), Rat(0));
  for (int k = r.low; k < high; ++k) {
    if (k >= a.low && k < a.high()) r.c[k - r.low] += a.c[k - a.low];
    if (k >= b.low && k < b.high()) r.c[k - r.low] += b.c[k - b.low];
  }
  return r;
}

Laurent scaled(const Laurent& a, const Rat& s) {
  Laurent r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

double MappingBackend::pole_distance(const VecC&) const {
  return std::numeric_limits<double>::infinity();
}

namespace {

constexpr int kGermTerms = 14;

Rat param_or(const std::map<std::string, Rat>& p, const std::string& name, const Rat& dflt) {
  auto it = p.find(name);
  return it == p.end() ? dflt : it->second;
}

Rat require_param(const std::map<std::string, Rat>& p, const std::string& name, const std::string& fam) {
  auto it = p.find(name);
  if (it == p.end()) throw StructuralError("family " + fam + " needs parameter " + name);
  return it->second;
}

std::vector<Rat> exact_laurent_coefficients(const Rat& g2, const Rat& g3) {
  std::vector<Rat> c(kGermTerms + 1, Rat(0));
  c[2] = g2 / 20;
  c[3] = g3 / 28;
  for (int k = 4; k <= kGermTerms; ++k) {
    Rat s = 0;
    for (int m = 2; m <= k - 2; ++m) s += c[m] * c[k - m];
    c[k] = Rat(3) / Rat((2 * k + 1) * (k - 3)) * s;
  }
  return c;
}

// wp(t), wp'(t), zeta(t) as Laurent series at the origin.
struct WpGerm {
  Laurent wp, wp_prime, zeta;
};

WpGerm wp_germ(const Rat& g2, const Rat& g3) {
  auto c = exact_laurent_coefficients(g2, g3);
  const int top = 2 * kGermTerms - 1;  // represent orders below this
  WpGerm g;
  g.wp.low = -2;
  g.wp.c.assign(top + 2, Rat(0));
  g.wp.c[0] = 1;
  g.wp_prime.low = -3;
  g.wp_prime.c.assign(top + 3, Rat(0));
  g.wp_prime.c[0] = -2;
  g.zeta.low = -1;
  g.zeta.c.assign(top + 1, Rat(0));
  g.zeta.c[0] = 1;
  for (int k = 2; k <= kGermTerms; ++k) {
    int e = 2 * k - 2;
    if (e < top) g.wp.c[e + 2] = c[k];
    if (e - 1 < top) g.wp_prime.c[e - 1 + 3] = Rat(e) * c[k];
    if (e + 1 < top) g.zeta.c[e + 1 + 1] = -c[k] / Rat(2 * k - 1);
  }
  return g;
}

// Rational roots of 4t^3 - g2 t - g3 paired with their numeric half-periods.
std::vector<std::pair<Rat, cplx>> rational_half_periods(const Lattice& lat, const Rat& g2, const Rat& g3) {
  std::vector<std::pair<Rat, cplx>> out;
  cplx omegas[3] = {lat.omega1, lat.omega2, lat.omega1 + lat.omega2};
  for (int i = 0; i < 3; ++i) {
    // Continued fractions suggest the candidate; the cubic decides exactly.
    if (std::abs(lat.e[i].imag()) > 1e-9) continue;
    double x = lat.e[i].real();
    for (long den = 1; den <= 64; ++den) {
      Rat cand = make_rat(Integer(long(std::lround(x * double(den)))), Integer(den));
      if (4 * cand * cand * cand - g2 * cand - g3 == 0) {
        out.emplace_back(cand, omegas[i]);
        break;
      }
    }
  }
  return out;
}

class ExpBackend : public MappingBackend {
 public:
  explicit ExpBackend(const std::map<std::string, Rat>& p)
      : MappingBackend(1, "exp", {{"c", param_or(p, "c", Rat(1))}}) {
    c_ = parameters().at("c");
    cd_ = c_.get_d();
  }
  VecC value(const VecC& u) const override { return VecC::Constant(1, std::exp(cd_ * u(0))); }
  MatC jacobian(const VecC& u) const override { return MatC::Constant(1, 1, cd_ * std::exp(cd_ * u(0))); }
  std::vector<MatC> hessian(const VecC& u) const override {
    return {MatC::Constant(1, 1, cd_ * cd_ * std::exp(cd_ * u(0)))};
  }
  std::vector<SpecialPoint> special_points() const override {
    SpecialPoint s;
    s.label = "v = 0";
    s.value = {Laurent::constant(1)};
    s.jac = {{Laurent::constant(c_)}};
    s.u = VecC::Zero(1);
    return {s};
  }
  std::optional<std::vector<Rat>> value_at_zero() const override { return std::vector<Rat>{Rat(1)}; }

 private:
  Rat c_;
  double cd_;
};

class RationalBackend : public MappingBackend {
 public:
  RationalBackend(const std::map<std::string, Rat>& p, const MPoly& phi)
      : MappingBackend(1, "rational", p), phi_(phi), d1_(derivative(phi, 0)), d2_(derivative(d1_, 0)) {}
  VecC value(const VecC& u) const override { return VecC::Constant(1, eval(phi_, u(0))); }
  MatC jacobian(const VecC& u) const override { return MatC::Constant(1, 1, eval(d1_, u(0))); }
  std::vector<MatC> hessian(const VecC& u) const override { return {MatC::Constant(1, 1, eval(d2_, u(0)))}; }
  // phi is a polynomial, so every rational v is an exact point.
  std::vector<SpecialPoint> special_points() const override {
    std::vector<SpecialPoint> out;
    for (const Rat& v : {Rat(0), Rat(1), Rat(-1), Rat(2), Rat(1, 2), Rat(3)}) {
      SpecialPoint s;
      s.label = "v = " + to_string(v);
      s.value = {Laurent::constant(substitute_value(phi_, 0, v).constant_value())};
      s.jac = {{Laurent::constant(substitute_value(d1_, 0, v).constant_value())}};
      s.u = VecC::Constant(1, cplx(v.get_d(), 0.0));
      out.push_back(std::move(s));
    }
    return out;
  }
  std::optional<std::vector<Rat>> value_at_zero() const override {
    return std::vector<Rat>{substitute_value(phi_, 0, Rat(0)).constant_value()};
  }
  const MPoly& phi() const { return phi_; }

 private:
  static cplx eval(const MPoly& p, cplx u) {
    std::array<cplx, 1> v{u};
    return evaluate(p, v).value;
  }
  MPoly phi_, d1_, d2_;
};

class WeierstrassBackend : public MappingBackend {
 public:
  explicit WeierstrassBackend(const std::map<std::string, Rat>& p)
      : MappingBackend(1, "weierstrass",
                       {{"g2", require_param(p, "g2", "weierstrass")},
                        {"g3", require_param(p, "g3", "weierstrass")}}) {
    g2_ = parameters().at("g2");
    g3_ = parameters().at("g3");
    lat_ = make_lattice(g2_.get_d(), g3_.get_d());
  }
  VecC value(const VecC& u) const override { return VecC::Constant(1, weierstrass_p(lat_, u(0))); }
  MatC jacobian(const VecC& u) const override {
    return MatC::Constant(1, 1, weierstrass_p_prime(lat_, u(0)));
  }
  std::vector<MatC> hessian(const VecC& u) const override {
    cplx w = weierstrass_p(lat_, u(0));
    return {MatC::Constant(1, 1, 6.0 * w * w - lat_.g2 / 2.0)};
  }
  double pole_distance(const VecC& u) const override { return lattice_distance(lat_, u(0)); }
  const Lattice* lattice() const override { return &lat_; }
  std::vector<SpecialPoint> special_points() const override {
    std::vector<SpecialPoint> out;
    int i = 0;
    for (auto& [e, w] : rational_half_periods(lat_, g2_, g3_)) {
      SpecialPoint s;
      s.label = "v = half-period " + std::to_string(++i) + " (wp = " + to_string(e) + ", wp' = 0)";
      s.value = {Laurent::constant(e)};
      s.jac = {{Laurent::constant(Rat(0))}};
      s.u = VecC::Constant(1, w);
      out.push_back(s);
    }
    WpGerm g = wp_germ(g2_, g3_);
    SpecialPoint s;
    s.label = "v = t -> 0 (pole germ, lowest order in t)";
    s.germ = true;
    s.value = {g.wp};
    s.jac = {{g.wp_prime}};
    out.push_back(s);
    return out;
  }

 private:
  Rat g2_, g3_;
  Lattice lat_;
};

class ProductBackend : public MappingBackend {
 public:
  // case1: (u1, u2); case2: (u1, e^u2); case3: (e^u1, e^u2).
  ProductBackend(const std::string& family, bool exp1, bool exp2)
      : MappingBackend(2, family, {}), exp_{exp1, exp2} {}
  VecC value(const VecC& u) const override {
    VecC r(2);
    for (int k = 0; k < 2; ++k) r(k) = exp_[k] ? std::exp(u(k)) : u(k);
    return r;
  }
  MatC jacobian(const VecC& u) const override {
    MatC J = MatC::Zero(2, 2);
    for (int k = 0; k < 2; ++k) J(k, k) = exp_[k] ? std::exp(u(k)) : cplx(1.0);
    return J;
  }
  std::vector<MatC> hessian(const VecC& u) const override {
    std::vector<MatC> H(2, MatC::Zero(2, 2));
    for (int k = 0; k < 2; ++k) H[k](k, k) = exp_[k] ? std::exp(u(k)) : cplx(0.0);
    return H;
  }
  std::vector<SpecialPoint> special_points() const override {
    SpecialPoint s;
    s.label = "v = 0";
    auto z = value_at_zero();
    s.value = {Laurent::constant((*z)[0]), Laurent::constant((*z)[1])};
    s.jac = {{Laurent::constant(1), Laurent::constant(0)},
             {Laurent::constant(0), Laurent::constant(1)}};
    s.u = VecC::Zero(2);
    return {s};
  }
  std::optional<std::vector<Rat>> value_at_zero() const override {
    return std::vector<Rat>{Rat(exp_[0] ? 1 : 0), Rat(exp_[1] ? 1 : 0)};
  }

 private:
  bool exp_[2];
};

// (wp(u1), u2 - eps zeta(u1)).
class QuasiPeriodicBackend : public MappingBackend {
 public:
  explicit QuasiPeriodicBackend(const std::map<std::string, Rat>& p)
      : MappingBackend(2, "singular2-case4",
                       {{"g2", require_param(p, "g2", "singular2-case4")},
                        {"g3", require_param(p, "g3", "singular2-case4")},
                        {"eps", param_or(p, "eps", Rat(1))}}) {
    g2_ = parameters().at("g2");
    g3_ = parameters().at("g3");
    eps_ = parameters().at("eps");
    lat_ = make_lattice(g2_.get_d(), g3_.get_d());
  }
  VecC value(const VecC& u) const override {
    auto w = weierstrass_all(lat_, u(0));
    VecC r(2);
    r << w.wp, u(1) - eps_.get_d() * w.zeta;
    return r;
  }
  MatC jacobian(const VecC& u) const override {
    auto w = weierstrass_all(lat_, u(0));
    MatC J(2, 2);
    J << w.wp_prime, 0.0, eps_.get_d() * w.wp, 1.0;
    return J;
  }
  std::vector<MatC> hessian(const VecC& u) const override {
    auto w = weierstrass_all(lat_, u(0));
    std::vector<MatC> H(2, MatC::Zero(2, 2));
    H[0](0, 0) = 6.0 * w.wp * w.wp - lat_.g2 / 2.0;
    H[1](0, 0) = eps_.get_d() * w.wp_prime;
    return H;
  }
  double pole_distance(const VecC& u) const override { return lattice_distance(lat_, u(0)); }
  const Lattice* lattice() const override { return &lat_; }
  std::vector<SpecialPoint> special_points() const override {
    std::vector<SpecialPoint> out;
    if (eps_ == 0) {
      int i = 0;
      for (auto& [e, w] : rational_half_periods(lat_, g2_, g3_)) {
        SpecialPoint s;
        s.label = "v = (half-period " + std::to_string(++i) + ", 0)";
        s.value = {Laurent::constant(e), Laurent::constant(0)};
        s.jac = {{Laurent::constant(0), Laurent::constant(0)}, {Laurent::constant(0), Laurent::constant(1)}};
        VecC u(2);
        u << w, 0.0;
        s.u = u;
        out.push_back(s);
      }
    }
    WpGerm g = wp_germ(g2_, g3_);
    SpecialPoint s;
    s.label = "v = (t, 0), t -> 0 (pole germ, lowest order in t)";
    s.germ = true;
    s.value = {g.wp, scaled(g.zeta, -eps_)};
    s.jac = {{g.wp_prime, Laurent::constant(0)}, {scaled(g.wp, eps_), Laurent::constant(1)}};
    out.push_back(s);
    return out;
  }

 private:
  Rat g2_, g3_, eps_;
  Lattice lat_;
};

// (wp(u1), e^u2 sigma(u1 - a) / sigma(u1)).
class SigmaQuotientBackend : public MappingBackend {
 public:
  explicit SigmaQuotientBackend(const std::map<std::string, Rat>& p)
      : MappingBackend(2, "singular2-case5",
                       {{"g2", require_param(p, "g2", "singular2-case5")},
                        {"g3", require_param(p, "g3", "singular2-case5")},
                        {"a", param_or(p, "a", make_rat(1, 2))}}) {
    a_ = parameters().at("a").get_d();
    lat_ = make_lattice(parameters().at("g2").get_d(), parameters().at("g3").get_d());
  }
  struct Parts {
    WeierstrassValues w, wa;
    cplx phi2;
  };
  Parts parts(const VecC& u) const {
    Parts p;
    p.w = weierstrass_all(lat_, u(0));
    p.wa = weierstrass_all(lat_, u(0) - a_);
    p.phi2 = std::exp(u(1)) * p.wa.sigma / p.w.sigma;
    return p;
  }
  VecC value(const VecC& u) const override {
    auto p = parts(u);
    VecC r(2);
    r << p.w.wp, p.phi2;
    return r;
  }
  MatC jacobian(const VecC& u) const override {
    auto p = parts(u);
    cplx Z = p.wa.zeta - p.w.zeta;
    MatC J(2, 2);
    J << p.w.wp_prime, 0.0, p.phi2 * Z, p.phi2;
    return J;
  }
  std::vector<MatC> hessian(const VecC& u) const override {
    auto p = parts(u);
    cplx Z = p.wa.zeta - p.w.zeta;
    cplx dZ = -p.wa.wp + p.w.wp;
    std::vector<MatC> H(2, MatC::Zero(2, 2));
    H[0](0, 0) = 6.0 * p.w.wp * p.w.wp - lat_.g2 / 2.0;
    H[1] << p.phi2 * (Z * Z + dZ), p.phi2 * Z, p.phi2 * Z, p.phi2;
    return H;
  }
  double pole_distance(const VecC& u) const override {
    return std::min(lattice_distance(lat_, u(0)), lattice_distance(lat_, u(0) - a_));
  }
  const Lattice* lattice() const override { return &lat_; }

 private:
  double a_;
  Lattice lat_;
};

}  // namespace

RingPtr rational_family_ring() {
  static const RingPtr ring = make_ring({"u"});
  return ring;
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{
      "exp",           "rational",        "weierstrass",     "singular2-case1",
      "singular2-case2", "singular2-case3", "singular2-case4", "singular2-case5"};
  return names;
}

int family_dimension(const std::string& family) {
  if (family == "exp" || family == "rational" || family == "weierstrass") return 1;
  if (family.rfind("singular2-case", 0) == 0) return 2;
  throw StructuralError("unknown family '" + family + "'");
}

BackendPtr make_backend(const std::string& family, const std::map<std::string, Rat>& params,
                        const std::optional<MPoly>& phi) {
  if (family == "exp") return std::make_shared<ExpBackend>(params);
  if (family == "rational") {
    MPoly p = phi ? *phi : MPoly::symbol(rational_family_ring(), 0);
    if (p.total_degree() < 1) throw DomainError("rational family needs a nonconstant phi(u)");
    return std::make_shared<RationalBackend>(params, p);
  }
  if (family == "weierstrass") return std::make_shared<WeierstrassBackend>(params);
  if (family == "singular2-case1") return std::make_shared<ProductBackend>(family, false, false);
  if (family == "singular2-case2") return std::make_shared<ProductBackend>(family, false, true);
  if (family == "singular2-case3") return std::make_shared<ProductBackend>(family, true, true);
  if (family == "singular2-case4") return std::make_shared<QuasiPeriodicBackend>(params);
  if (family == "singular2-case5") return std::make_shared<SigmaQuotientBackend>(params);
  throw StructuralError("unknown family '" + family + "'");
}

}  // namespace aat

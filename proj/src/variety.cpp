#include "aat/variety.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "aat/errors.hpp"
#include "aat/extension.hpp"
#include "aat/poly_algo.hpp"

namespace aat {

namespace {

std::string alpha_text(const AlphaMatrix& a) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < a.size(); ++k) {
    os << (k ? ",[" : "[");
    for (std::size_t p = 0; p < a[k].size(); ++p) os << (p ? "," : "") << a[k][p];
    os << ']';
  }
  os << ']';
  return os.str();
}

MPoly theta_relation(const RingPtr& ring, int n, const AlphaMatrix& alpha) {
  MPoly t = MPoly::symbol(ring, "theta");
  for (int k = 1; k <= n; ++k)
    for (int p = 1; p <= n; ++p)
      if (alpha[k - 1][p - 1] != 0) t -= MPoly::symbol(ring, z_name(k, p)).scaled(Rat(alpha[k - 1][p - 1]));
  return t;
}

// Root of a polynomial that is linear in its variable.
template <class F>
F linear_root(const UPoly<F>& u) {
  return -(u.coeff(0) / u.coeff(1));
}

std::optional<RatFn> express_one(const AATSystem& sys, const Derivation& d, const AlphaMatrix& alpha,
                                 const ExtensionPtr& ctx, int k, int p) {
  const auto& ring = sys.ring;
  std::size_t zs = ring->index(z_name(k, p));
  const MPoly& P = d.find(k, p)->P;
  try {
    if (P.degree(zs) == 1) {
      auto u = to_upoly(P, zs);
      return ExtElem::from(ctx, linear_root(u)).to_ratfn();
    }
    std::vector<MPoly> S = {theta_relation(ring, sys.n, alpha)};
    std::vector<std::size_t> others;
    for (const auto& r : d.relations) {
      if (r.k == k && r.p == p) continue;
      S.push_back(r.P);
      others.push_back(ring->index(z_name(r.k, r.p)));
    }
    auto g = lift(P, zs, ctx);
    for (const auto& q : eliminate_symbols(S, others)) {
      if (!q.contains(zs)) continue;
      g = gcd(g, lift(q, zs, ctx));
      if (g.degree() <= 1) break;
    }
    if (g.degree() != 1) return std::nullopt;
    return linear_root(g).to_ratfn();
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

bool single_factor(const MPoly& m) { return m.size() == 1 && m.to_string().find('*') == std::string::npos; }

std::string differential_term(const RatFn& c, const std::string& dx) {
  if (c.num().is_constant() && c.den().is_one()) {
    Rat v = c.num().constant_value();
    if (v == Rat(1)) return dx;
    if (v == Rat(-1)) return "-" + dx;
  }
  if (c.num().is_constant() && (c.num().constant_value() == Rat(1) || c.num().constant_value() == Rat(-1))) {
    std::string sign = c.num().constant_value() == Rat(1) ? "" : "-";
    std::string den = c.den().to_string();
    return sign + dx + "/" + (single_factor(c.den()) ? den : "(" + den + ")");
  }
  return "(" + c.to_string() + ") " + dx;
}

MPoly determinant(const std::vector<std::vector<MPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  MPoly det(m[0][0].ring());
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<MPoly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<MPoly> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[i][c]);
      minor.push_back(std::move(row));
    }
    MPoly t = m[0][j] * determinant(minor);
    if (j % 2) det -= t;
    else det += t;
  }
  return det;
}

}  // namespace

std::vector<AlphaMatrix> alpha_search_order(int n) {
  std::vector<AlphaMatrix> out;
  std::set<AlphaMatrix> seen;
  auto add = [&](const AlphaMatrix& a) {
    if (seen.insert(a).second) out.push_back(a);
  };
  AlphaMatrix id(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  add(id);
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p) {
      AlphaMatrix e(n, std::vector<int>(n, 0));
      e[k][p] = 1;
      add(e);
    }
  // The full grid has 5^(n*n) members; beyond n = 2 only the unit choices are tried.
  if (n > 2) return out;
  static const int digits[] = {0, 1, -1, 2, -2};
  const int cells = n * n;
  std::vector<int> idx(cells, 0);
  while (true) {
    int c = cells - 1;
    while (c >= 0 && idx[c] == 4) idx[c--] = 0;
    if (c < 0) break;
    ++idx[c];
    AlphaMatrix a(n, std::vector<int>(n));
    for (int i = 0; i < cells; ++i) a[i / n][i % n] = digits[idx[i]];
    add(a);
  }
  return out;
}

std::optional<VarietySpec> variety_for_alpha(const AATSystem& sys, const Derivation& d, const AlphaMatrix& alpha,
                                             BackendPtr backend, const SamplingOptions& opts, std::string& reason) {
  const int n = sys.n;
  if (!d.complete(n)) throw StageError("variety", "first-order relations are incomplete");
  const auto& ring = sys.ring;
  const std::size_t th = ring->index("theta");
  int bound = 1;
  std::vector<MPoly> S = {theta_relation(ring, n, alpha)};
  std::vector<std::size_t> zs;
  for (const auto& r : d.relations) {
    std::size_t z = ring->index(z_name(r.k, r.p));
    S.push_back(r.P);
    zs.push_back(z);
    bound *= r.P.degree(z);
  }
  std::sort(zs.begin(), zs.end());
  auto rest = eliminate_symbols(S, zs);
  std::stable_sort(rest.begin(), rest.end(),
                   [th](const MPoly& a, const MPoly& b) { return a.degree(th) < b.degree(th); });
  std::optional<MPoly> V;
  ResidualReport vrep;
  for (const auto& q : rest) {
    if (!q.contains(th)) continue;
    if ((V = select_vanishing_factor(q, th, backend, opts, vrep, &alpha))) break;
  }
  if (!V) {
    reason = "no vanishing factor in theta";
    return std::nullopt;
  }
  VarietySpec spec(*V);
  spec.alpha = alpha;
  spec.degree_bound = bound;
  spec.residual = std::move(vrep);
  spec.h = V->degree(th);
  spec.separable = squarefree_check(*V, th);
  if (!spec.separable) {
    reason = "V is not separable";
    return std::nullopt;
  }
  auto ctx = make_extension(*V, th);
  for (const auto& r : d.relations) {
    auto e = express_one(sys, d, alpha, ctx, r.k, r.p);
    if (!e) {
      reason = z_name(r.k, r.p) + " is not expressible in theta and x";
      return std::nullopt;
    }
    MPoly check = MPoly::symbol(ring, z_name(r.k, r.p)) * e->den() - e->num();
    auto rep = residual_check(z_name(r.k, r.p) + " = " + e->to_string(), check, backend, opts, &alpha);
    if (!rep.pass) {
      reason = "expression for " + z_name(r.k, r.p) + " fails the residual check";
      return std::nullopt;
    }
    spec.derivative_expressions.emplace(std::make_pair(r.k, r.p), std::move(*e));
    spec.expression_residuals.push_back(std::move(rep));
  }
  return spec;
}

VarietySpec find_primitive_element(const AATSystem& sys, const Derivation& d, BackendPtr backend,
                                   const SamplingOptions& opts) {
  std::vector<std::string> log;
  for (const auto& alpha : alpha_search_order(sys.n)) {
    std::string reason;
    if (auto spec = variety_for_alpha(sys, d, alpha, backend, opts, reason)) {
      spec->search_log = std::move(log);
      return std::move(*spec);
    }
    log.push_back(alpha_text(alpha) + ": " + reason);
  }
  throw StageError("variety", "no primitive element found with |alpha| <= 2");
}

RatFn express_derivative(const VarietySpec& spec, int k, int p) {
  auto it = spec.derivative_expressions.find({k, p});
  if (it == spec.derivative_expressions.end())
    throw DomainError("no expression for " + z_name(k, p));
  return it->second;
}

bool expression_consistent(const VarietySpec& spec, const MPoly& Pkp, int k, int p) {
  const auto& ring = spec.V.ring();
  auto ctx = make_extension(spec.V, ring->index("theta"));
  auto u = lift(Pkp, ring->index(z_name(k, p)), ctx);
  ExtElem r = ExtElem::from(ctx, express_derivative(spec, k, p));
  return u.evaluate(r, ExtElem::zero(ctx)).is_zero();
}

PijMatrix build_pij(int n, RingPtr ring) {
  if (n < 1) throw DomainError("build_pij needs n >= 1");
  if (!ring) ring = make_standard_ring(n, {});
  std::vector<std::vector<MPoly>> Z(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Z[i].push_back(MPoly::symbol(ring, z_name(i + 1, j + 1)));
  PijMatrix m(determinant(Z));
  m.n = n;
  m.ring = ring;
  m.p.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.p[i].emplace_back(derivative(m.J, ring->index(z_name(i + 1, j + 1))), m.J);
  return m;
}

std::vector<std::vector<RatFn>> inverse_matrix(const std::vector<std::vector<RatFn>>& m) {
  const std::size_t n = m.size();
  const RingPtr& ring = m[0][0].ring();
  std::vector<std::vector<RatFn>> a = m, inv;
  for (std::size_t i = 0; i < n; ++i) {
    inv.emplace_back();
    for (std::size_t j = 0; j < n; ++j) inv[i].push_back(RatFn::constant(ring, Rat(i == j ? 1 : 0)));
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) throw DomainError("singular matrix");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    RatFn s = a[c][c].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] *= s;
      inv[c][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      RatFn f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

bool adjugate_identity(const PijMatrix& pij) {
  std::vector<std::vector<RatFn>> Z(pij.n);
  for (int i = 0; i < pij.n; ++i)
    for (int j = 0; j < pij.n; ++j) Z[i].emplace_back(MPoly::symbol(pij.ring, z_name(i + 1, j + 1)));
  auto inv = inverse_matrix(Z);
  for (int i = 0; i < pij.n; ++i)
    for (int j = 0; j < pij.n; ++j)
      if (!(pij.p[i][j] - inv[j][i]).is_zero()) return false;
  return true;
}

PainleveSystem painleve_system(const VarietySpec& spec, const PijMatrix& pij) {
  const int n = pij.n;
  const auto& ring = spec.V.ring();
  auto ctx = make_extension(spec.V, ring->index("theta"));
  PainleveSystem out;
  out.entries.assign(n, std::vector<std::optional<RatFn>>(n));
  for (int i = 0; i < n; ++i) {
    std::string line = n == 1 ? "du = " : "du" + std::to_string(i + 1) + " = ";
    std::vector<std::string> terms;
    for (int j = 0; j < n; ++j) {
      // du_i/dx_j is the (i, j) entry of the inverse Jacobian, which is p_ji.
      const RatFn& pji = pij.p[j][i];
      RatFn f = pij.ring == ring ? pji : RatFn(embed(pji.num(), ring), embed(pji.den(), ring));
      try {
        for (const auto& [kp, r] : spec.derivative_expressions)
          f = compose(f, ring->index(z_name(kp.first, kp.second)), r);
        // Numerator and denominator reduced separately often read better
        // (1/theta rather than theta/(4*x1^3 - 4*x1)); the shorter text wins.
        RatFn reduced = ExtElem::from(ctx, f).to_ratfn();
        ExtElem den = ExtElem::from(ctx, RatFn(f.den()));
        if (den.is_zero()) throw DomainError("pole");
        RatFn split = ExtElem::from(ctx, RatFn(f.num())).to_ratfn() / den.to_ratfn();
        if (split.to_string().size() <= reduced.to_string().size()) reduced = split;
        out.entries[i][j] = reduced;
        if (!reduced.is_zero())
          terms.push_back(differential_term(reduced, n == 1 ? "dx" : "dx" + std::to_string(j + 1)));
      } catch (const DomainError&) {
        out.errors.push_back("p" + std::to_string(j + 1) + std::to_string(i + 1) + ": pole modulo V");
      }
    }
    if (terms.empty()) terms.push_back("0");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (t == 0) line += terms[t];
      else if (terms[t][0] == '-') line += " - " + terms[t].substr(1);
      else line += " + " + terms[t];
    }
    out.lines.push_back(std::move(line));
  }
  return out;
}

}  // namespace aat

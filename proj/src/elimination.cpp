#include "aat/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "aat/errors.hpp"
#include "aat/numerics.hpp"
#include "aat/poly_algo.hpp"

namespace aat {

const FirstOrderRelation* Derivation::find(int k, int p) const {
  for (const auto& r : relations)
    if (r.k == k && r.p == p) return &r;
  return nullptr;
}

namespace {

// Index in the backend data for symbols that live on the v side:
// y_k -> (k, 0), w_k_p -> (k, p).  Anything else -> (0, 0).
struct VSlot {
  int k = 0, p = 0;
};

std::vector<VSlot> v_slots(const RingPtr& ring, int n) {
  std::vector<VSlot> out(ring->size());
  for (std::size_t i = 0; i < ring->size(); ++i) {
    if (ring->is_parameter(i)) continue;
    const std::string& s = ring->name(i);
    int k = 0, p = 0;
    if (s[0] == 'w' && std::sscanf(s.c_str() + 1, "%d_%d", &k, &p) == 2) {
      if (k >= 1 && k <= n && p >= 1 && p <= n) out[i] = {k, p};
    } else if (s[0] == 'y' && std::sscanf(s.c_str() + 1, "%d", &k) == 1 && k >= 1 && k <= n) {
      out[i] = {k, 0};
    }
  }
  return out;
}

std::vector<std::size_t> z_symbols(const RingPtr& ring, int n) {
  std::vector<std::size_t> out;
  for (int k = 1; k <= n; ++k)
    for (int p = 1; p <= n; ++p)
      if (auto i = ring->find(z_name(k, p))) out.push_back(*i);
  return out;
}

bool contains_any(const MPoly& p, const std::vector<std::size_t>& syms) {
  for (auto s : syms)
    if (p.contains(s)) return true;
  return false;
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return lex_compare(a, b) > 0; }
};

// Drops the part of p that is free of the z symbols and normalizes.
MPoly z_primitive(const MPoly& p, const std::vector<std::size_t>& zs) {
  if (p.is_zero()) return p;
  MPoly c = content_in_set(p, zs);
  MPoly q = c.is_constant() ? p : exact_quotient(p, c);
  return primitive_integer(q);
}

bool degenerate(const MPoly& h, const std::vector<std::size_t>& zs) {
  return h.is_zero() || !contains_any(h, zs);
}

std::optional<MPoly> numeric_substitution_fit(const MPoly& H, const MappingBackend& b, int n,
                                              const VecC& v1, const VecC& v2, std::string& why) {
  const auto slots = v_slots(H.ring(), n);
  auto coefficient_map = [&](const VecC& v) {
    VecC f = b.value(v);
    MatC J = b.jacobian(v);
    std::map<Monomial, std::complex<double>, MonoLess> acc;
    for (const auto& t : H.terms()) {
      Monomial rest = t.mono;
      std::complex<double> c = t.coeff.get_d();
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].k || !t.mono.exp[i]) continue;
        cplx val = slots[i].p ? J(slots[i].k - 1, slots[i].p - 1) : f(slots[i].k - 1);
        c *= std::pow(val, int(t.mono.exp[i]));
        rest.exp[i] = 0;
      }
      acc[rest] += c;
    }
    return acc;
  };
  auto a = coefficient_map(v1);
  double big = 0;
  Monomial pivot{};
  for (auto& [m, c] : a)
    if (std::abs(c) > big) {
      big = std::abs(c);
      pivot = m;
    }
  if (big == 0) {
    why = "all coefficients vanish";
    return std::nullopt;
  }
  const cplx norm = a[pivot];
  std::vector<Term> terms;
  std::vector<std::pair<Monomial, cplx>> normalized;
  for (auto& [m, c] : a) {
    cplx q = c / norm;
    if (std::abs(q) < 1e-11) continue;
    if (std::abs(q.imag()) > 1e-9 * std::max(1.0, std::abs(q))) {
      why = "coefficient " + std::to_string(q.real()) + "+" + std::to_string(q.imag()) + "i is not real";
      return std::nullopt;
    }
    auto r = reconstruct_rational(q.real());
    if (!r) {
      why = "no rational reconstruction for " + std::to_string(q.real());
      return std::nullopt;
    }
    terms.push_back(Term{m, *r});
    normalized.emplace_back(m, q);
  }
  // Consistency at a second point.
  auto b2 = coefficient_map(v2);
  cplx norm2 = b2[pivot];
  if (std::abs(norm2) == 0) {
    why = "second point degenerates";
    return std::nullopt;
  }
  for (auto& [m, c] : b2) {
    cplx q = c / norm2;
    cplx expect = 0;
    for (auto& [mm, cc] : normalized)
      if (mm == m) expect = cc;
    if (std::abs(q - expect) > 1e-8 * std::max(1.0, std::abs(expect))) {
      why = "coefficients change with v";
      return std::nullopt;
    }
  }
  return MPoly::from_terms(H.ring(), std::move(terms));
}

std::vector<std::vector<std::size_t>> elimination_orders(std::vector<std::size_t> others, int max_orders) {
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(others);
  } while (int(out.size()) < max_orders && std::next_permutation(others.begin(), others.end()));
  return out;
}

// Eliminates `vars` one at a time: polynomials containing the variable are
// replaced by resultants against the first of them.
std::vector<MPoly> eliminate_chain(std::vector<MPoly> S, const std::vector<std::size_t>& vars,
                                   const std::vector<std::size_t>& zs) {
  for (auto var : vars) {
    std::vector<MPoly> with, without;
    for (auto& p : S) (p.contains(var) ? with : without).push_back(p);
    if (with.size() > 1) {
      std::stable_sort(with.begin(), with.end(),
                       [var](const MPoly& a, const MPoly& b) { return a.degree(var) < b.degree(var); });
      for (std::size_t i = 1; i < with.size(); ++i) {
        MPoly r = resultant(with[0], with[i], var);
        if (r.is_zero()) continue;
        r = zs.empty() ? primitive_integer(r) : z_primitive(r, zs);
        if (!r.is_constant()) without.push_back(r);
      }
    }
    S = std::move(without);
  }
  return S;
}

}  // namespace

MPoly content_in_set(const MPoly& p, const std::vector<std::size_t>& symbols) {
  std::map<Monomial, std::vector<Term>, MonoLess> groups;
  for (const auto& t : p.terms()) {
    Monomial key{}, rest = t.mono;
    for (auto s : symbols) {
      key.exp[s] = t.mono.exp[s];
      rest.exp[s] = 0;
    }
    groups[key].push_back(Term{rest, t.coeff});
  }
  MPoly g(p.ring());
  for (auto& [k, terms] : groups) {
    g = gcd(g, MPoly::from_terms(p.ring(), std::move(terms)));
    if (g.is_constant()) break;
  }
  return g;
}

AATSystem make_system(const ProblemSpec& spec) {
  AATSystem sys{spec.n, spec.ring, spec.aat};
  for (int k = 1; k <= spec.n; ++k) {
    MPoly& g = sys.polys[k - 1];
    for (const auto& [name, value] : spec.params)
      if (auto i = sys.ring->find(name)) g = substitute_value(g, *i, value);
    if (g.degree(l_name(k)) < 1)
      throw StructuralError("G" + std::to_string(k) + " has degree 0 in " + l_name(k));
    for (auto s : g.symbols_used()) {
      const std::string& name = sys.ring->name(s);
      if (sys.ring->is_parameter(s)) continue;
      bool bad = name == "theta" || name[0] == 'z' || name[0] == 'w' || name == "x0" || name == "y0" ||
                 (name[0] == 'L' && name != l_name(k));
      if (bad) throw StructuralError("G" + std::to_string(k) + " may not use " + name);
    }
  }
  return sys;
}

EliminationOptions elimination_options(const ProblemOptions& o) {
  EliminationOptions e;
  e.sampling.samples = o.samples;
  e.sampling.seed = o.seed;
  e.sampling.box = o.box;
  e.sampling.tol = o.tol;
  e.mode = o.mode;
  e.retries = o.retries;
  return e;
}

MPoly cross_difference(const AATSystem& sys, int k, int p) {
  const MPoly& G = sys.polys.at(k - 1);
  MPoly d(sys.ring);
  for (int i = 1; i <= sys.n; ++i) {
    d += derivative(G, x_name(i)) * MPoly::symbol(sys.ring, z_name(i, p));
    d -= derivative(G, y_name(i)) * MPoly::symbol(sys.ring, w_name(i, p));
  }
  if (d.is_zero())
    throw StructuralError("degenerate AAT: cross-difference of G" + std::to_string(k) +
                          " vanishes (G" + std::to_string(k) + " is free of x and y)");
  return d;
}

std::pair<MPoly, MPoly> gcd_and_eliminant(const MPoly& Gk, const MPoly& delta, int k) {
  std::size_t L = Gk.ring()->index(l_name(k));
  MPoly g = gcd(Gk, delta);
  MPoly gq = exact_quotient(Gk, g);
  MPoly dq = exact_quotient(delta, g);
  if (!dq.contains(L)) return {g, primitive_integer(dq)};
  if (!gq.contains(L)) return {g, MPoly(Gk.ring())};
  return {g, primitive_integer(resultant(gq, dq, L))};
}

std::optional<MPoly> substitute_special_point(const MPoly& H, const SpecialPoint& sp, int n) {
  const auto slots = v_slots(H.ring(), n);
  if (!sp.germ) {
    MPoly h = H;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].k || !h.contains(i)) continue;
      const Laurent& s = slots[i].p ? sp.jac.at(slots[i].k - 1).at(slots[i].p - 1) : sp.value.at(slots[i].k - 1);
      h = substitute_value(h, i, s.low == 0 ? s.c[0] : Rat(0));
    }
    return h;
  }
  auto series_of = [&](const VSlot& s) -> const Laurent& {
    return s.p ? sp.jac.at(s.k - 1).at(s.p - 1) : sp.value.at(s.k - 1);
  };
  std::map<std::pair<std::size_t, int>, Laurent> powers;
  auto power = [&](std::size_t sym, int e) -> const Laurent& {
    auto key = std::make_pair(sym, e);
    if (auto it = powers.find(key); it != powers.end()) return it->second;
    Laurent r = series_of(slots[sym]);
    for (int i = 2; i <= e; ++i) {
      auto k = std::make_pair(sym, i);
      if (auto it = powers.find(k); it != powers.end()) {
        r = it->second;
        continue;
      }
      r = r * series_of(slots[sym]);
      powers.emplace(k, r);
    }
    return powers.emplace(key, std::move(r)).first->second;
  };
  std::map<int, std::vector<Term>> buckets;
  int valid_high = std::numeric_limits<int>::max();
  for (const auto& t : H.terms()) {
    Laurent s = Laurent::constant(Rat(1));
    Monomial rest = t.mono;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i].k || !t.mono.exp[i]) continue;
      s = s * power(i, t.mono.exp[i]);
      rest.exp[i] = 0;
    }
    valid_high = std::min(valid_high, s.high());
    for (std::size_t j = 0; j < s.c.size(); ++j)
      if (s.c[j] != 0) buckets[s.low + int(j)].push_back(Term{rest, t.coeff * s.c[j]});
  }
  for (auto& [order, terms] : buckets) {
    if (order >= valid_high) return std::nullopt;  // not enough series terms
    MPoly h = MPoly::from_terms(H.ring(), std::move(terms));
    if (!h.is_zero()) return h;
  }
  return MPoly(H.ring());
}

MPoly specialize_v(const MPoly& H, const MappingBackend& backend, const EliminationOptions& opts,
                   SpecializationRecord& record) {
  const int n = backend.n();
  const auto zs = z_symbols(H.ring(), n);
  int failures = 0;
  auto accept = [&](const std::optional<MPoly>& h, const std::string& label, const std::string& mode) {
    if (h && !degenerate(*h, zs)) {
      record.mode = mode;
      record.point = label;
      record.retries = failures;
      record.attempts.push_back(label + ": ok");
      return true;
    }
    record.attempts.push_back(label + ": " + (h ? (h->is_zero() ? "vanishes" : "free of z") : "series too short"));
    ++failures;
    return false;
  };
  if (opts.mode == SpecializationMode::ExactPoint) {
    for (const auto& sp : backend.special_points()) {
      if (failures > opts.retries) break;
      auto h = substitute_special_point(H, sp, n);
      if (accept(h, sp.label, sp.germ ? "pole-germ" : "exact-point")) return z_primitive(*h, zs);
    }
  }
  std::mt19937_64 rng(opts.sampling.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(-opts.sampling.box, opts.sampling.box);
  auto draw = [&] {
    for (;;) {
      VecC v(n);
      for (int i = 0; i < n; ++i) v(i) = cplx(unif(rng), unif(rng));
      if (backend.pole_distance(v) > 0.2) return v;
    }
  };
  while (failures <= opts.retries) {
    VecC v1 = draw(), v2 = draw();
    std::string why;
    char label[96];
    std::snprintf(label, sizeof label, "generic v (%.6f%+.6fi, ...)", v1(0).real(), v1(0).imag());
    std::optional<MPoly> h;
    try {
      h = numeric_substitution_fit(H, backend, n, v1, v2, why);
    } catch (const PoleError&) {
      why = "pole";
    }
    if (h && !degenerate(*h, zs)) {
      record.mode = "numeric-reconstruct";
      record.point = label;
      record.retries = failures;
      record.attempts.push_back(std::string(label) + ": ok");
      return z_primitive(*h, zs);
    }
    record.attempts.push_back(std::string(label) + ": " + (h ? "degenerate" : why));
    ++failures;
  }
  record.retries = failures;
  throw StageError("specialize", "no generic specialization found");
}

std::optional<MPoly> select_vanishing_factor(const MPoly& p, std::size_t symbol, BackendPtr backend,
                                             const SamplingOptions& opts, ResidualReport& report,
                                             const AlphaMatrix* alpha, const std::vector<MPoly>& hints) {
  for (const auto& f : candidate_factors(p, symbol, hints)) {
    report = residual_check(f.to_string(), f, backend, opts, alpha);
    if (report.pass) return f;
  }
  return std::nullopt;
}

Derivation derive_first_order(const AATSystem& sys, BackendPtr backend, const EliminationOptions& opts) {
  const int n = sys.n;
  if (n > 2) throw StageError("derive", "symbolic derivation is limited to n <= 2");
  Derivation d;
  const auto zs = z_symbols(sys.ring, n);
  std::vector<MPoly> relations;  // reduced h_kp
  std::map<std::pair<int, int>, int> bounds;
  for (int k = 1; k <= n; ++k) {
    for (int p = 1; p <= n; ++p) {
      TraceEntry e{k, p, cross_difference(sys, k, p), MPoly(sys.ring), MPoly(sys.ring), std::nullopt, {}, {}};
      auto [g, H] = gcd_and_eliminant(sys.polys[k - 1], e.delta, k);
      e.gcd = g;
      e.eliminant = H;
      bounds[{k, p}] = sys.polys[k - 1].degree(l_name(k)) * e.delta.total_degree();
      if (H.is_zero()) {
        e.note = "eliminant vanishes; no relation from this index";
        d.trace.push_back(std::move(e));
        continue;
      }
      try {
        MPoly h = specialize_v(H, *backend, opts, e.record);
        e.specialized = h;
        // Keep only a factor that vanishes on the backend when one exists.
        std::vector<MPoly> cands;
        std::set<std::string> seen;
        for (auto s : zs) {
          if (!h.contains(s)) continue;
          for (auto& f : candidate_factors(h, s))
            if (seen.insert(f.to_string()).second) cands.push_back(f);
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const MPoly& a, const MPoly& b) { return a.total_degree() < b.total_degree(); });
        MPoly reduced = h;
        for (auto& f : cands) {
          if (f == h) break;
          if (residual_check(f.to_string(), f, backend, opts.sampling).pass) {
            reduced = f;
            break;
          }
        }
        relations.push_back(reduced);
      } catch (const StageError& err) {
        e.note = err.what();
        d.failures.push_back("h_" + std::to_string(k) + std::to_string(p) + ": " + err.what());
      }
      d.trace.push_back(std::move(e));
    }
  }

  const int max_orders = 1 + std::max(0, opts.retries);
  for (int k = 1; k <= n; ++k) {
    for (int p = 1; p <= n; ++p) {
      std::size_t target = sys.ring->index(z_name(k, p));
      std::vector<std::size_t> others;
      for (auto s : zs)
        if (s != target) others.push_back(s);
      std::vector<std::string> tried;
      bool done = false;
      std::optional<FirstOrderRelation> unverified;
      for (const auto& order : elimination_orders(others, max_orders)) {
        std::vector<std::string> names;
        for (auto s : order) names.push_back(sys.ring->name(s));
        std::string joined;
        for (auto& s : names) joined += (joined.empty() ? "" : ",") + s;
        tried.push_back("[" + joined + "]");
        auto S = eliminate_chain(relations, order, zs);
        std::vector<MPoly> cands;
        for (auto& q : S)
          if (q.contains(target)) cands.push_back(q);
        if (cands.empty()) continue;
        std::stable_sort(cands.begin(), cands.end(),
                         [](const MPoly& a, const MPoly& b) { return a.size() < b.size(); });
        for (auto& c : cands) {
          FirstOrderRelation r(k, p, c);
          r.order = names;
          r.degree_bound = bounds[{k, p}];
          auto f = select_vanishing_factor(c, target, backend, opts.sampling, r.residual);
          if (f) {
            r.P = *f;
            r.verified = true;
            d.relations.push_back(std::move(r));
            done = true;
            break;
          }
          if (!unverified) {
            auto fs = candidate_factors(c, target);
            r.P = fs.empty() ? c : fs.front();
            unverified = r;
          }
        }
        if (done) break;
      }
      if (done) continue;
      std::string order_text;
      for (auto& t : tried) order_text += (order_text.empty() ? "" : " ") + t;
      if (unverified) {
        d.relations.push_back(*unverified);
        d.failures.push_back("P_" + std::to_string(k) + std::to_string(p) + " unverified: residual check fails");
      } else {
        d.failures.push_back("P_" + std::to_string(k) + std::to_string(p) +
                             ": dependent eliminant chain - choose different elimination order (tried " +
                             order_text + ")");
      }
    }
  }
  return d;
}

MPoly verify_general_dependence(const AATSystem& sys, const Derivation& d,
                                const std::vector<std::string>& selection, BackendPtr backend,
                                const SamplingOptions& opts, ResidualReport& report) {
  const int n = sys.n;
  if (int(selection.size()) != n + 1)
    throw StructuralError("selection must name exactly " + std::to_string(n + 1) + " symbols");
  std::set<std::size_t> chosen;
  for (auto& s : selection) {
    std::size_t i = sys.ring->index(s);
    bool ok = false;
    for (int k = 1; k <= n; ++k) {
      if (s == x_name(k)) ok = true;
      for (int p = 1; p <= n; ++p)
        if (s == z_name(k, p)) ok = true;
    }
    if (!ok) throw StructuralError("selection may only name x_k and zk_p symbols, got " + s);
    chosen.insert(i);
  }
  std::vector<MPoly> S;
  for (auto& r : d.relations) S.push_back(r.P);
  std::vector<std::size_t> drop;
  for (auto s : z_symbols(sys.ring, n))
    if (!chosen.count(s)) drop.push_back(s);
  for (int k = 1; k <= n; ++k) {
    std::size_t s = sys.ring->index(x_name(k));
    if (!chosen.count(s)) drop.push_back(s);
  }
  auto rest = eliminate_chain(S, drop, {});
  std::stable_sort(rest.begin(), rest.end(), [](const MPoly& a, const MPoly& b) { return a.size() < b.size(); });
  for (auto& q : rest) {
    std::size_t sym = q.ring()->size();
    for (auto s : chosen)
      if (q.contains(s) && sys.ring->name(s)[0] == 'z') {
        sym = s;
        break;
      }
    if (sym == q.ring()->size())
      for (auto s : chosen)
        if (q.contains(s)) {
          sym = s;
          break;
        }
    if (sym == q.ring()->size()) continue;
    if (auto f = select_vanishing_factor(q, sym, backend, opts, report)) return *f;
  }
  throw StageError("dependence", "no vanishing relation among the selected symbols");
}

std::vector<MPoly> eliminate_symbols(std::vector<MPoly> S, const std::vector<std::size_t>& vars) {
  return eliminate_chain(std::move(S), vars, {});
}

MPoly swap_sides(const MPoly& p, int n) {
  const RingPtr& R = p.ring();
  std::vector<std::size_t> map(R->size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;
  auto swap = [&](const std::string& a, const std::string& b) {
    auto i = R->find(a), j = R->find(b);
    if (i && j) std::swap(map[*i], map[*j]);
  };
  for (int k = 0; k <= n; ++k) swap(x_name(k), y_name(k));
  for (int k = 1; k <= n; ++k)
    for (int q = 1; q <= n; ++q) swap(z_name(k, q), w_name(k, q));
  return permute_symbols(p, map);
}

}  // namespace aat

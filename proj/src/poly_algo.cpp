#include "aat/poly_algo.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "aat/errors.hpp"

namespace aat {

namespace {

MPoly one_like(const MPoly& p) { return MPoly::constant(p.ring(), Rat(1)); }

// Leading coefficient with respect to `symbol` as a polynomial.
MPoly lc_in(const MPoly& p, std::size_t symbol) { return leading_coefficient_in(p, symbol); }

MPoly symbol_power(const RingPtr& ring, std::size_t symbol, int e) {
  Monomial m;
  m.exp[symbol] = static_cast<std::uint8_t>(e);
  return MPoly::monomial(ring, m, Rat(1));
}

// Lowest symbol index used by either polynomial.
std::size_t main_symbol(const MPoly& a, const MPoly& b) {
  return std::min(a.first_symbol(), b.first_symbol());
}

MPoly normalize_gcd(const MPoly& g) { return monic(g); }

// gcd of two polynomials that are primitive in `v` and both of positive degree in v.
MPoly primitive_gcd(MPoly a, MPoly b, std::size_t v) {
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  if (auto q = divide_exact(a, b)) return b;
  MPoly g = one_like(a), h = one_like(a);
  while (true) {
    int delta = a.degree(v) - b.degree(v);
    MPoly r = prem(a, b, v);
    if (r.is_zero()) return primitive_part_in(b, v);
    if (r.degree(v) == 0) return one_like(a);
    a = b;
    b = exact_quotient(r, g * pow(h, delta));
    g = lc_in(a, v);
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = exact_quotient(pow(g, delta), pow(h, delta - 1));
    }
  }
}

// Image of p in Q[v] with every other symbol set to point[i].
std::vector<Rat> univariate_image(const MPoly& p, std::size_t v, const std::vector<long>& point) {
  std::vector<Rat> c(std::size_t(p.degree(v) + 1), Rat(0));
  Integer mono;
  for (const auto& t : p.terms()) {
    Integer prod = 1;
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (i == v || !t.mono.exp[i]) continue;
      mpz_ui_pow_ui(mono.get_mpz_t(), std::abs(point[i]), t.mono.exp[i]);
      if (point[i] < 0 && t.mono.exp[i] % 2) mono = -mono;
      prod *= mono;
    }
    c[t.mono.exp[v]] += t.coeff * Rat(prod);
  }
  return c;
}

int univariate_gcd_degree(std::vector<Rat> a, std::vector<Rat> b) {
  auto trim = [](std::vector<Rat>& x) {
    while (!x.empty() && x.back() == 0) x.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b over Q
    while (a.size() >= b.size() && !a.empty()) {
      Rat f = a.back() / b.back();
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  return int(a.size()) - 1;
}

// True when a and b are certainly coprime: for every shared symbol v, an
// integer specialization of the other symbols keeping both degrees in v
// has a constant univariate gcd.  deg_v(gcd) can only drop under such a
// specialization, so a constant image bounds it by 0.
bool certainly_coprime(const MPoly& a, const MPoly& b) {
  const std::size_t n = a.ring()->size();
  for (std::size_t v = 0; v < n; ++v) {
    if (!a.contains(v) || !b.contains(v)) continue;
    bool proven = false;
    for (int attempt = 0; attempt < 3 && !proven; ++attempt) {
      std::vector<long> point(n);
      for (std::size_t i = 0; i < n; ++i) point[i] = 2 + long((i * 7 + std::size_t(attempt) * 5 + 3) % 17);
      auto ia = univariate_image(a, v, point), ib = univariate_image(b, v, point);
      if (ia.back() == 0 || ib.back() == 0) continue;
      proven = univariate_gcd_degree(ia, ib) == 0;
      if (!proven) return false;
    }
    if (!proven) return false;
  }
  return true;
}

}  // namespace

MPoly content_in(const MPoly& p, std::size_t symbol) {
  if (p.is_zero()) return p;
  if (!p.contains(symbol)) return normalize_gcd(p);
  auto coeffs = coefficients_in(p, symbol);
  // Start from the sparsest coefficient; gcds shrink quickly that way.
  std::sort(coeffs.begin(), coeffs.end(),
            [](const MPoly& x, const MPoly& y) { return x.size() < y.size(); });
  MPoly g(p.ring());
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return one_like(p);
  }
  return g;
}

MPoly primitive_part_in(const MPoly& p, std::size_t symbol) {
  if (p.is_zero()) return p;
  MPoly c = content_in(p, symbol);
  if (c.is_constant()) return p;
  return exact_quotient(p, c);
}

MPoly prem(const MPoly& a, const MPoly& b, std::size_t v) {
  require_same_ring(a, b);
  if (b.is_zero()) throw DomainError("pseudo-remainder by zero");
  int db = b.degree(v);
  int da = a.degree(v);
  if (da < db) return a;
  MPoly lb = lc_in(b, v);
  MPoly r = a;
  int steps = 0;
  while (!r.is_zero() && r.degree(v) >= db) {
    int dr = r.degree(v);
    MPoly lr = lc_in(r, v);
    r = lb * r - lr * symbol_power(a.ring(), v, dr - db) * b;
    ++steps;
  }
  int missing = da - db + 1 - steps;
  if (missing > 0) r *= pow(lb, missing);
  return r;
}

MPoly gcd(const MPoly& a, const MPoly& b) {
  require_same_ring(a, b);
  if (a.is_zero()) return normalize_gcd(b);
  if (b.is_zero()) return normalize_gcd(a);
  if (a.is_constant() || b.is_constant()) return one_like(a);
  if (a.size() == 1 && b.size() == 1) {
    Monomial m;
    const auto& ma = a.terms()[0].mono;
    const auto& mb = b.terms()[0].mono;
    for (std::size_t i = 0; i < kMaxSymbols; ++i) m.exp[i] = std::min(ma.exp[i], mb.exp[i]);
    return MPoly::monomial(a.ring(), m, Rat(1));
  }
  if (a.size() > 1 && b.size() > 1 && certainly_coprime(a, b)) return one_like(a);
  std::size_t v = main_symbol(a, b);
  if (!a.contains(v)) return gcd(a, content_in(b, v));
  if (!b.contains(v)) return gcd(content_in(a, v), b);
  MPoly ca = content_in(a, v), cb = content_in(b, v);
  MPoly c = gcd(ca, cb);
  MPoly pa = ca.is_constant() ? a : exact_quotient(a, ca);
  MPoly pb = cb.is_constant() ? b : exact_quotient(b, cb);
  MPoly g = primitive_gcd(pa, pb, v);
  return normalize_gcd(c * g);
}

MPoly resultant(const MPoly& a_in, const MPoly& b_in, std::size_t v) {
  require_same_ring(a_in, b_in);
  if (!a_in.contains(v) || !b_in.contains(v))
    throw DomainError("resultant in '" + a_in.ring()->name(v) +
                      "' of a polynomial that does not involve it");
  MPoly a = a_in, b = b_in;
  int sign = 1;
  if (a.degree(v) < b.degree(v)) {
    std::swap(a, b);
    if ((a.degree(v) * b.degree(v)) % 2) sign = -sign;
  }
  MPoly ca = content_in(a, v), cb = content_in(b, v);
  MPoly t = pow(ca, b.degree(v)) * pow(cb, a.degree(v));
  if (!ca.is_constant()) a = exact_quotient(a, ca);
  if (!cb.is_constant()) b = exact_quotient(b, cb);
  MPoly g = one_like(a), h = one_like(a);
  while (true) {
    int da = a.degree(v), db = b.degree(v);
    int delta = da - db;
    if (da % 2 == 1 && db % 2 == 1) sign = -sign;
    MPoly r = prem(a, b, v);
    a = b;
    if (r.is_zero()) return MPoly(a.ring());
    b = exact_quotient(r, g * pow(h, delta));
    g = lc_in(a, v);
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      h = exact_quotient(pow(g, delta), pow(h, delta - 1));
    }
    if (b.degree(v) > 0) continue;
    int dA = a.degree(v);
    MPoly last = exact_quotient(pow(b, dA), pow(h, dA - 1));
    MPoly res = t * last;
    return sign < 0 ? -res : res;
  }
}

MPoly resultant(const MPoly& a, const MPoly& b, std::string_view symbol) {
  return resultant(a, b, a.ring()->index(symbol));
}

bool squarefree_check(const MPoly& p, std::size_t symbol) {
  if (!p.contains(symbol))
    throw DomainError("squarefree check in '" + p.ring()->name(symbol) +
                      "' of a polynomial that does not involve it");
  return gcd(p, derivative(p, symbol)).degree(symbol) == 0;
}

bool squarefree_check(const MPoly& p, std::string_view symbol) {
  return squarefree_check(p, p.ring()->index(symbol));
}

std::vector<MPoly> squarefree_decomposition(const MPoly& p, std::size_t v) {
  if (!p.contains(v)) return {};
  MPoly f = primitive_part_in(p, v);
  MPoly df = derivative(f, v);
  MPoly a = gcd(f, df);
  MPoly b = exact_quotient(f, a);
  MPoly c = exact_quotient(df, a);
  std::vector<MPoly> out;
  while (b.degree(v) > 0) {
    MPoly d = c - derivative(b, v);
    MPoly g = gcd(b, d);
    out.push_back(g);
    b = exact_quotient(b, g);
    c = exact_quotient(d, g);
  }
  for (auto& q : out) q = q.degree(v) > 0 ? primitive_integer(q) : one_like(p);
  while (!out.empty() && out.back().is_one()) out.pop_back();
  return out;
}

MPoly squarefree_part(const MPoly& p, std::size_t v) {
  MPoly r = one_like(p);
  for (const auto& f : squarefree_decomposition(p, v))
    if (!f.is_one()) r *= f;
  return primitive_integer(r);
}

std::optional<MPoly> poly_sqrt(const MPoly& p) {
  if (p.is_zero()) return p;
  const Term& lt = p.leading_term();
  auto c = exact_sqrt(lt.coeff);
  if (!c) return std::nullopt;
  Monomial m;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) {
    if (lt.mono.exp[i] % 2) return std::nullopt;
    m.exp[i] = lt.mono.exp[i] / 2;
  }
  MPoly root = MPoly::monomial(p.ring(), m, *c);
  Term lead{m, *c};
  MPoly rem = p - root * root;
  Monomial last = m;
  std::size_t guard = 0;
  while (!rem.is_zero()) {
    const Term& r = rem.leading_term();
    if (!lead.mono.divides(r.mono)) return std::nullopt;
    Term t{r.mono / lead.mono, r.coeff / (2 * lead.coeff)};
    if (lex_compare(t.mono, last) >= 0) return std::nullopt;
    last = t.mono;
    MPoly step = MPoly::monomial(p.ring(), t.mono, t.coeff);
    rem -= step * (root + root + step);
    root += step;
    if (++guard > 4 * p.size() + 64) return std::nullopt;
  }
  return root;
}

namespace {

// Small positive divisors of |z|, capped; used for rational-root candidates.
std::vector<Integer> small_divisors(Integer z, std::size_t cap = 2000) {
  z = abs(z);
  std::vector<Integer> out;
  if (z == 0 || z > Integer(1000000000)) return out;
  unsigned long n = z.get_ui();
  for (unsigned long d = 1; d * d <= n && out.size() < cap; ++d) {
    if (n % d) continue;
    out.push_back(Integer(d));
    if (d * d != n) out.push_back(Integer(n / d));
  }
  return out;
}

// Linear factors (symbol - r) with rational r that divide p exactly.
std::vector<Rat> rational_roots(const MPoly& p, std::size_t v) {
  // Collapse the other symbols to a fixed integer point to get a univariate
  // integer polynomial whose rational roots are the only candidates.
  std::vector<Integer> uni(p.degree(v) + 1, Integer(0));
  Integer scale = 1;
  for (const auto& t : p.terms()) scale = lcm(scale, t.coeff.get_den());
  for (const auto& t : p.terms()) {
    Integer val = Integer(t.coeff * scale);
    for (std::size_t i = 0; i < kMaxSymbols; ++i) {
      if (i == v || !t.mono.exp[i]) continue;
      Integer base = Integer(3 + 2 * (i % 5));
      Integer pw;
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), t.mono.exp[i]);
      val *= pw;
    }
    uni[t.mono.exp[v]] += val;
  }
  std::size_t low = 0;
  while (low < uni.size() && uni[low] == 0) ++low;
  std::vector<Rat> cands;
  if (low > 0) cands.push_back(Rat(0));
  if (low >= uni.size()) return cands;
  auto nums = small_divisors(uni[low]);
  auto dens = small_divisors(uni.back());
  for (const auto& a : nums)
    for (const auto& b : dens) {
      Rat r = make_rat(a, b);
      cands.push_back(r);
      cands.push_back(-r);
    }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::vector<Rat> roots;
  for (const auto& r : cands) {
    // Horner on the integer image first; it is cheap and rejects almost everything.
    Rat acc = 0;
    for (std::size_t k = uni.size(); k-- > 0;) acc = acc * r + Rat(uni[k]);
    if (acc != 0) continue;
    if (substitute_value(p, v, r).is_zero()) roots.push_back(r);
  }
  return roots;
}

}  // namespace

std::vector<MPoly> candidate_factors(const MPoly& p, std::size_t v, const std::vector<MPoly>& hints) {
  std::vector<MPoly> work;
  for (const auto& f : squarefree_decomposition(p, v))
    if (f.degree(v) > 0) work.push_back(f);

  auto split_by = [&](const MPoly& divisor) {
    std::vector<MPoly> next;
    for (const auto& f : work) {
      MPoly g = gcd(f, divisor);
      if (g.degree(v) > 0 && g.degree(v) < f.degree(v)) {
        next.push_back(primitive_integer(g));
        next.push_back(primitive_integer(primitive_part_in(exact_quotient(f, g), v)));
      } else {
        next.push_back(f);
      }
    }
    work = std::move(next);
  };

  for (const auto& h : hints)
    if (h.contains(v)) split_by(h);

  std::vector<MPoly> linear;
  for (const auto& f : work)
    if (f.degree(v) > 1)
      for (const auto& r : rational_roots(f, v))
        linear.push_back(MPoly::symbol(p.ring(), v) - MPoly::constant(p.ring(), r));
  for (const auto& l : linear) split_by(l);

  std::map<std::string, MPoly> uniq;
  for (auto& f : work) {
    if (f.degree(v) <= 0) continue;
    MPoly q = primitive_integer(primitive_part_in(f, v));
    uniq.emplace(q.to_string(), q);
  }
  std::vector<MPoly> out;
  for (auto& [k, q] : uniq) out.push_back(q);
  std::stable_sort(out.begin(), out.end(), [v](const MPoly& a, const MPoly& b) {
    return a.degree(v) < b.degree(v);
  });
  return out;
}

}  // namespace aat

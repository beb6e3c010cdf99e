#include "aat/mpoly.hpp"

#include <algorithm>
#include <queue>

#include "aat/errors.hpp"

namespace aat {

unsigned Monomial::total_degree() const {
  unsigned d = 0;
  for (auto e : exp) d += e;
  return d;
}

bool Monomial::is_one() const {
  for (auto e : exp)
    if (e) return false;
  return true;
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < kMaxSymbols; ++i)
    if (exp[i] > other.exp[i]) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  std::uint8_t overflow = 0;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) {
    m.exp[i] = static_cast<std::uint8_t>(a.exp[i] + b.exp[i]);
    overflow |= static_cast<std::uint8_t>(m.exp[i] < a.exp[i]);
  }
  if (overflow) throw DomainError("exponent overflow (degree > 255)");
  return m;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kMaxSymbols; ++i) {
    if (b.exp[i] > a.exp[i]) throw DomainError("monomial division is not exact");
    m.exp[i] = static_cast<std::uint8_t>(a.exp[i] - b.exp[i]);
  }
  return m;
}

namespace detail {

void mul_rat(Rat& r, const Rat& a, const Rat& b) {
  if (mpz_cmp_ui(mpq_denref(a.get_mpq_t()), 1) == 0 && mpz_cmp_ui(mpq_denref(b.get_mpq_t()), 1) == 0) {
    mpz_mul(mpq_numref(r.get_mpq_t()), mpq_numref(a.get_mpq_t()), mpq_numref(b.get_mpq_t()));
    mpz_set_ui(mpq_denref(r.get_mpq_t()), 1);
  } else {
    mpq_mul(r.get_mpq_t(), a.get_mpq_t(), b.get_mpq_t());
  }
}

void add_rat(Rat& r, const Rat& a, bool subtract) {
  if (mpz_cmp_ui(mpq_denref(r.get_mpq_t()), 1) == 0 && mpz_cmp_ui(mpq_denref(a.get_mpq_t()), 1) == 0) {
    if (subtract)
      mpz_sub(mpq_numref(r.get_mpq_t()), mpq_numref(r.get_mpq_t()), mpq_numref(a.get_mpq_t()));
    else
      mpz_add(mpq_numref(r.get_mpq_t()), mpq_numref(r.get_mpq_t()), mpq_numref(a.get_mpq_t()));
  } else if (subtract) {
    mpq_sub(r.get_mpq_t(), r.get_mpq_t(), a.get_mpq_t());
  } else {
    mpq_add(r.get_mpq_t(), r.get_mpq_t(), a.get_mpq_t());
  }
}

}  // namespace detail

namespace {

bool term_before(const Term& a, const Term& b) { return lex_compare(a.mono, b.mono) > 0; }

std::vector<Term> merge_terms(std::vector<Term>&& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size())
      c = -1;
    else if (j == b.size())
      c = 1;
    else
      c = lex_compare(a[i].mono, b[j].mono);
    if (c > 0) {
      out.push_back(std::move(a[i++]));
    } else if (c < 0) {
      out.push_back(b[j]);
      if (subtract) out.back().coeff = -out.back().coeff;
      ++j;
    } else {
      detail::add_rat(a[i].coeff, b[j].coeff, subtract);
      if (a[i].coeff != 0) out.push_back(std::move(a[i]));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace


MPoly::MPoly(RingPtr ring) : ring_(std::move(ring)) {
  if (!ring_) throw StructuralError("polynomial without a ring");
}

MPoly MPoly::constant(RingPtr ring, const Rat& c) {
  MPoly p(std::move(ring));
  if (c != 0) p.terms_.push_back(Term{Monomial{}, c});
  return p;
}

MPoly MPoly::symbol(RingPtr ring, std::size_t index) {
  if (index >= ring->size()) throw StructuralError("symbol index out of range");
  MPoly p(std::move(ring));
  Monomial m;
  m.exp[index] = 1;
  p.terms_.push_back(Term{m, Rat(1)});
  return p;
}

MPoly MPoly::symbol(RingPtr ring, std::string_view name) {
  auto idx = ring->index(name);
  return symbol(std::move(ring), idx);
}

MPoly MPoly::monomial(RingPtr ring, const Monomial& m, const Rat& c) {
  MPoly p(std::move(ring));
  if (c != 0) p.terms_.push_back(Term{m, c});
  return p;
}

MPoly MPoly::from_terms(RingPtr ring, std::vector<Term> terms) {
  MPoly p(std::move(ring));
  std::sort(terms.begin(), terms.end(), term_before);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

Rat MPoly::constant_value() const {
  if (!is_constant()) throw DomainError("polynomial is not constant: " + to_string());
  return terms_.empty() ? Rat(0) : terms_[0].coeff;
}

bool MPoly::is_one() const {
  return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff == 1;
}

const Term& MPoly::leading_term() const {
  if (terms_.empty()) throw DomainError("leading term of the zero polynomial");
  return terms_.front();
}

int MPoly::degree(std::size_t symbol) const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, int(t.mono.exp[symbol]));
  return d;
}

int MPoly::degree(std::string_view symbol) const { return degree(ring_->index(symbol)); }

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, int(t.mono.total_degree()));
  return d;
}

bool MPoly::contains(std::size_t symbol) const {
  for (const auto& t : terms_)
    if (t.mono.exp[symbol]) return true;
  return false;
}

bool MPoly::contains(std::string_view symbol) const { return contains(ring_->index(symbol)); }

std::size_t MPoly::first_symbol() const {
  // Leading term in lex order has the lowest-index symbol when any term does.
  for (const auto& t : terms_)
    for (std::size_t i = 0; i < ring_->size(); ++i)
      if (t.mono.exp[i]) return i;
  return ring_->size();
}

std::vector<std::size_t> MPoly::symbols_used() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ring_->size(); ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

void require_same_ring(const MPoly& a, const MPoly& b) {
  if (a.ring() != b.ring() && !(*a.ring() == *b.ring()))
    throw StructuralError("ring mismatch between polynomial operands");
}

MPoly& MPoly::operator+=(const MPoly& other) {
  require_same_ring(*this, other);
  if (other.terms_.empty()) return *this;
  terms_ = merge_terms(std::move(terms_), other.terms_, false);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& other) {
  require_same_ring(*this, other);
  if (other.terms_.empty()) return *this;
  terms_ = merge_terms(std::move(terms_), other.terms_, true);
  return *this;
}

MPoly& MPoly::operator*=(const MPoly& other) {
  *this = *this * other;
  return *this;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

MPoly MPoly::scaled(const Rat& c) const {
  if (c == 0) return MPoly(ring_);
  MPoly r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

MPoly MPoly::times_monomial(const Monomial& m, const Rat& c) const {
  if (c == 0) return MPoly(ring_);
  MPoly r(ring_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back(Term{t.mono * m, t.coeff * c});
  return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  require_same_ring(a, b);
  if (a.is_zero() || b.is_zero()) return MPoly(a.ring());
  if (a.size() == 1) return b.times_monomial(a.terms_[0].mono, a.terms_[0].coeff);
  if (b.size() == 1) return a.times_monomial(b.terms_[0].mono, b.terms_[0].coeff);
  const MPoly& outer = a.size() <= b.size() ? a : b;
  const MPoly& inner = a.size() <= b.size() ? b : a;

  // Johnson-style heap merge: row i is outer[i] * inner, already sorted.
  struct Cursor {
    Monomial mono;
    std::size_t i, j;
  };
  auto cmp = [](const Cursor& x, const Cursor& y) { return lex_compare(x.mono, y.mono) < 0; };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < outer.size(); ++i)
    heap.push(Cursor{outer.terms_[i].mono * inner.terms_[0].mono, i, 0});

  MPoly r(a.ring());
  Rat prod;
  while (!heap.empty()) {
    Cursor c = heap.top();
    heap.pop();
    detail::mul_rat(prod, outer.terms_[c.i].coeff, inner.terms_[c.j].coeff);
    if (!r.terms_.empty() && r.terms_.back().mono == c.mono) {
      detail::add_rat(r.terms_.back().coeff, prod, false);
    } else {
      if (!r.terms_.empty() && r.terms_.back().coeff == 0) r.terms_.pop_back();
      r.terms_.push_back(Term{c.mono, prod});
    }
    if (c.j + 1 < inner.size())
      heap.push(Cursor{outer.terms_[c.i].mono * inner.terms_[c.j + 1].mono, c.i, c.j + 1});
  }
  if (!r.terms_.empty() && r.terms_.back().coeff == 0) r.terms_.pop_back();
  return r;
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    bool neg = t.coeff < 0;
    Rat mag = abs(t.coeff);
    // Parameters act as coefficients, so they print ahead of the variables.
    std::string mono;
    auto append = [&](std::size_t i) {
      unsigned e = t.mono.exp[i];
      if (!e) return;
      if (!mono.empty()) mono += "*";
      mono += ring_->name(i);
      if (e > 1) mono += "^" + std::to_string(e);
    };
    for (std::size_t i = ring_->num_variables(); i < ring_->size(); ++i) append(i);
    for (std::size_t i = 0; i < ring_->num_variables(); ++i) append(i);
    std::string body;
    if (mono.empty())
      body = aat::to_string(mag);
    else if (mag == 1)
      body = mono;
    else
      body = aat::to_string(mag) + "*" + mono;
    if (first)
      out += (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

MPoly pow(const MPoly& p, long exponent) {
  if (exponent < 0) throw DomainError("negative exponent in polynomial power");
  MPoly result = MPoly::constant(p.ring(), Rat(1));
  MPoly base = p;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

MPoly derivative(const MPoly& p, std::size_t symbol) {
  if (symbol >= p.ring()->size()) throw StructuralError("derivative with respect to unknown symbol");
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    unsigned e = t.mono.exp[symbol];
    if (!e) continue;
    Term d{t.mono, t.coeff * Rat(e)};
    d.mono.exp[symbol] = static_cast<std::uint8_t>(e - 1);
    out.push_back(std::move(d));
  }
  // Lowering one exponent uniformly keeps the relative lex order.
  MPoly r(p.ring());
  r = MPoly::from_terms(p.ring(), std::move(out));
  return r;
}

MPoly derivative(const MPoly& p, std::string_view symbol) {
  return derivative(p, p.ring()->index(symbol));
}

std::vector<MPoly> coefficients_in(const MPoly& p, std::size_t symbol) {
  int d = p.degree(symbol);
  std::vector<std::vector<Term>> buckets(std::max(d, 0) + 1);
  for (const auto& t : p.terms()) {
    Term c = t;
    unsigned e = c.mono.exp[symbol];
    c.mono.exp[symbol] = 0;
    buckets[e].push_back(std::move(c));
  }
  std::vector<MPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(MPoly::from_terms(p.ring(), std::move(b)));
  if (d < 0) out.assign(1, MPoly(p.ring()));
  return out;
}

MPoly from_coefficients(const std::vector<MPoly>& coeffs, std::size_t symbol, const RingPtr& ring) {
  std::vector<Term> out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (const auto& t : coeffs[k].terms()) {
      Term c = t;
      if (c.mono.exp[symbol]) throw DomainError("coefficient already contains the main variable");
      c.mono.exp[symbol] = static_cast<std::uint8_t>(k);
      out.push_back(std::move(c));
    }
  }
  return MPoly::from_terms(ring, std::move(out));
}

MPoly coefficient_of(const MPoly& p, std::size_t symbol, int power) {
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    if (int(t.mono.exp[symbol]) != power) continue;
    Term c = t;
    c.mono.exp[symbol] = 0;
    out.push_back(std::move(c));
  }
  return MPoly::from_terms(p.ring(), std::move(out));
}

MPoly leading_coefficient_in(const MPoly& p, std::size_t symbol) {
  return coefficient_of(p, symbol, p.degree(symbol));
}

MPoly compose(const MPoly& p, std::size_t symbol, const MPoly& value) {
  require_same_ring(p, value);
  if (!p.contains(symbol)) return p;
  auto c = coefficients_in(p, symbol);
  MPoly r = c.back();
  for (int k = int(c.size()) - 2; k >= 0; --k) r = r * value + c[k];
  return r;
}

MPoly substitute_value(const MPoly& p, std::size_t symbol, const Rat& value) {
  return compose(p, symbol, MPoly::constant(p.ring(), value));
}

MPoly permute_symbols(const MPoly& p, std::span<const std::size_t> mapping) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    Term c{Monomial{}, t.coeff};
    for (std::size_t i = 0; i < p.ring()->size(); ++i) {
      if (!t.mono.exp[i]) continue;
      std::size_t j = mapping[i];
      unsigned s = unsigned(c.mono.exp[j]) + t.mono.exp[i];
      if (s > 255) throw DomainError("exponent overflow in permutation");
      c.mono.exp[j] = static_cast<std::uint8_t>(s);
    }
    out.push_back(std::move(c));
  }
  return MPoly::from_terms(p.ring(), std::move(out));
}

MPoly embed(const MPoly& p, const RingPtr& target) {
  if (p.ring() == target) return p;
  std::vector<std::size_t> map(p.ring()->size(), 0);
  for (std::size_t i = 0; i < p.ring()->size(); ++i) {
    if (!p.contains(i)) continue;
    auto j = target->find(p.ring()->name(i));
    if (!j) throw StructuralError("symbol '" + p.ring()->name(i) + "' missing from target ring");
    map[i] = *j;
  }
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    Term c{Monomial{}, t.coeff};
    for (std::size_t i = 0; i < p.ring()->size(); ++i)
      if (t.mono.exp[i]) c.mono.exp[map[i]] = t.mono.exp[i];
    out.push_back(std::move(c));
  }
  return MPoly::from_terms(target, std::move(out));
}

std::optional<MPoly> divide_exact(const MPoly& a, const MPoly& b) {
  require_same_ring(a, b);
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  if (a.is_zero()) return MPoly(a.ring());
  if (b.is_constant()) return a.scaled(Rat(1) / b.constant_value());
  const Term& lb = b.leading_term();
  if (b.size() == 1) {
    std::vector<Term> q;
    for (const auto& t : a.terms()) {
      if (!lb.mono.divides(t.mono)) return std::nullopt;
      q.push_back(Term{t.mono / lb.mono, t.coeff / lb.coeff});
    }
    return MPoly::from_terms(a.ring(), std::move(q));
  }
  // Cheap necessary condition on per-symbol degrees.
  std::vector<int> qbound(a.ring()->size());
  for (std::size_t i = 0; i < a.ring()->size(); ++i) {
    qbound[i] = a.degree(i) - b.degree(i);
    if (qbound[i] < 0) return std::nullopt;
  }
  // Johnson heap division: the heap holds q_i * b_j for j >= 1 in
  // descending order; the dividend is streamed alongside.
  struct Cursor {
    Monomial mono;
    std::size_t i, j;
  };
  auto cmp = [](const Cursor& x, const Cursor& y) { return lex_compare(x.mono, y.mono) < 0; };
  const auto& at = a.terms();
  const auto& bt = b.terms();
  // At most one cursor per quotient term.
  std::vector<Cursor> store;
  store.reserve(at.size() + 1);
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(cmp)> heap(cmp, std::move(store));
  std::vector<Term> q;
  q.reserve(at.size());
  std::size_t ai = 0;
  Rat acc, prod;
  Monomial mono;
  while (ai < at.size() || !heap.empty()) {
    bool from_a = ai < at.size() && (heap.empty() || lex_compare(at[ai].mono, heap.top().mono) >= 0);
    mono = from_a ? at[ai].mono : heap.top().mono;
    acc = 0;
    if (ai < at.size() && at[ai].mono == mono) acc = at[ai++].coeff;
    while (!heap.empty() && heap.top().mono == mono) {
      std::size_t ci = heap.top().i, cj = heap.top().j;
      heap.pop();
      Cursor c{Monomial{}, ci, cj};
      detail::mul_rat(prod, q[c.i].coeff, bt[c.j].coeff);
      detail::add_rat(acc, prod, true);
      if (c.j + 1 < bt.size()) heap.push(Cursor{q[c.i].mono * bt[c.j + 1].mono, c.i, c.j + 1});
    }
    if (acc == 0) continue;
    if (!lb.mono.divides(mono)) return std::nullopt;
    Monomial qm = mono / lb.mono;
    for (std::size_t i = 0; i < a.ring()->size(); ++i)
      if (int(qm.exp[i]) > qbound[i]) return std::nullopt;
    q.push_back(Term{qm, acc / lb.coeff});
    heap.push(Cursor{q.back().mono * bt[1].mono, q.size() - 1, 1});
  }
  return MPoly::from_terms(a.ring(), std::move(q));
}

MPoly exact_quotient(const MPoly& a, const MPoly& b) {
  auto q = divide_exact(a, b);
  if (!q) throw DomainError("inexact polynomial division");
  return *q;
}

MPoly primitive_integer(const MPoly& p) {
  if (p.is_zero()) return p;
  Integer den_lcm = 1, num_gcd = 0;
  for (const auto& t : p.terms()) {
    den_lcm = lcm(den_lcm, t.coeff.get_den());
    num_gcd = gcd(num_gcd, t.coeff.get_num());
  }
  Rat scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (p.leading_coefficient() < 0) scale = -scale;
  return p.scaled(scale);
}

MPoly monic(const MPoly& p) {
  if (p.is_zero()) return p;
  return p.scaled(Rat(1) / p.leading_coefficient());
}

NumericValue evaluate(const MPoly& p, std::span<const std::complex<double>> values) {
  const std::size_t n = p.ring()->size();
  if (values.size() < n) throw StructuralError("numeric evaluation needs a value for every symbol");
  std::vector<int> maxdeg(n, 0);
  for (const auto& t : p.terms())
    for (std::size_t i = 0; i < n; ++i) maxdeg[i] = std::max(maxdeg[i], int(t.mono.exp[i]));
  std::vector<std::vector<std::complex<double>>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!maxdeg[i]) continue;
    powers[i].resize(maxdeg[i] + 1);
    powers[i][0] = 1.0;
    for (int e = 1; e <= maxdeg[i]; ++e) powers[i][e] = powers[i][e - 1] * values[i];
  }
  NumericValue out{0.0, 0.0};
  for (const auto& t : p.terms()) {
    std::complex<double> term = t.coeff.get_d();
    for (std::size_t i = 0; i < n; ++i)
      if (t.mono.exp[i]) term *= powers[i][t.mono.exp[i]];
    out.value += term;
    out.max_term = std::max(out.max_term, std::abs(term));
  }
  return out;
}

}  // namespace aat

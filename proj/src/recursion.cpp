#include "aat/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aat/errors.hpp"

namespace aat {

namespace {

RatFn poly_total_derivative(const MPoly& f, int q, int n, const RingPtr& ring,
                            const std::map<std::vector<int>, RatFn>& second) {
  RatFn acc(ring);
  for (int i = 1; i <= n; ++i) {
    std::size_t x = ring->index(x_name(i));
    if (f.contains(x)) acc += RatFn(derivative(f, x) * MPoly::symbol(ring, z_name(i, q)));
  }
  for (int k = 1; k <= n; ++k)
    for (int p = 1; p <= n; ++p) {
      std::size_t z = ring->index(z_name(k, p));
      if (!f.contains(z)) continue;
      auto it = second.find({k, p, q});
      if (it == second.end()) throw DomainError("no second derivative for " + z_name(k, p));
      acc += RatFn(derivative(f, z)) * it->second;
    }
  return acc;
}

}  // namespace

DerivativeRecursion::DerivativeRecursion(const Derivation& d, RingPtr ring, int n) : n_(n), ring_(std::move(ring)) {
  if (!d.complete(n)) throw StageError("recursion", "first-order relations are incomplete");
  for (const auto& r : d.relations) {
    P_.emplace(std::make_pair(r.k, r.p), r.P);
    pivot_.emplace(std::make_pair(r.k, r.p), derivative(r.P, ring_->index(z_name(r.k, r.p))));
  }
  for (int k = 1; k <= n; ++k)
    for (int p = 1; p <= n; ++p) {
      const MPoly& P = P_.at({k, p});
      for (int q = 1; q <= n; ++q) {
        RatFn num(ring_);
        for (int i = 1; i <= n; ++i) {
          std::size_t x = ring_->index(x_name(i));
          if (P.contains(x)) num += RatFn(derivative(P, x) * MPoly::symbol(ring_, z_name(i, q)));
        }
        second_.emplace(std::vector<int>{k, p, q}, -num / RatFn(pivot_.at({k, p})));
      }
    }
}

const MPoly& DerivativeRecursion::pivot(int k, int p) const { return pivot_.at({k, p}); }

RatFn DerivativeRecursion::total_derivative(const RatFn& f, int q) const {
  RatFn dn = poly_total_derivative(f.num(), q, n_, ring_, second_);
  if (f.is_polynomial()) return dn;
  RatFn dd = poly_total_derivative(f.den(), q, n_, ring_, second_);
  return (dn * RatFn(f.den()) - RatFn(f.num()) * dd) / RatFn(f.den() * f.den());
}

RatFn DerivativeRecursion::symbolic(int k, const std::vector<int>& idx) const {
  if (idx.empty() || idx.size() > 3) throw DomainError("derivative order must be 1, 2 or 3");
  if (idx.size() == 1) return RatFn(MPoly::symbol(ring_, z_name(k, idx[0])));
  RatFn f = second_.at({k, idx[0], idx[1]});
  for (std::size_t i = 2; i < idx.size(); ++i) f = total_derivative(f, idx[i]);
  return f;
}

std::vector<cplx> bind_point(const RingPtr& ring, const MappingBackend& backend, const VecC& u) {
  const int n = backend.n();
  std::vector<cplx> vals(ring->size(), cplx(std::nan(""), 0.0));
  VecC f = backend.value(u);
  MatC J = backend.jacobian(u);
  for (int k = 1; k <= n; ++k) {
    vals[ring->index(x_name(k))] = f(k - 1);
    for (int p = 1; p <= n; ++p) vals[ring->index(z_name(k, p))] = J(k - 1, p - 1);
  }
  for (std::size_t i = ring->num_variables(); i < ring->size(); ++i) {
    auto it = backend.parameters().find(ring->name(i));
    if (it != backend.parameters().end()) vals[i] = it->second.get_d();
  }
  return vals;
}

cplx higher_derivative(const DerivativeRecursion& rec, const MappingBackend& backend, int k,
                       const std::vector<int>& idx, const VecC& u) {
  auto vals = bind_point(rec.ring(), backend, u);
  for (int j = 1; j <= rec.n(); ++j)
    for (int p = 1; p <= rec.n(); ++p) {
      auto v = evaluate(rec.pivot(j, p), vals);
      if (std::abs(v.value) < 1e-12 * std::max(1.0, v.max_term)) throw DomainError("recursion singular at u");
    }
  return evaluate(rec.symbolic(k, idx), vals);
}

std::string to_string(TaylorMatch t) {
  switch (t) {
    case TaylorMatch::Match: return "match";
    case TaylorMatch::Mismatch: return "mismatch";
    case TaylorMatch::NotApplicable: return "not-applicable";
    case TaylorMatch::Indeterminate: return "indeterminate";
  }
  return "?";
}

TaylorMatch taylor_match_check(const DerivativeRecursion& rec, const MappingBackend& backend, const VecC& a,
                               const VecC& b, int order, double tol) {
  const int n = rec.n();
  auto close = [tol](cplx x, cplx y) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(x)); };
  VecC fa = backend.value(a), fb = backend.value(b);
  MatC Ja = backend.jacobian(a), Jb = backend.jacobian(b);
  for (int k = 0; k < n; ++k) {
    if (!close(fa(k), fb(k))) return TaylorMatch::NotApplicable;
    for (int p = 0; p < n; ++p)
      if (!close(Ja(k, p), Jb(k, p))) return TaylorMatch::NotApplicable;
  }
  std::vector<std::vector<int>> multi;
  for (int m = 2; m <= std::min(order, 3); ++m) {
    std::vector<int> idx(m, 1);
    while (true) {
      multi.push_back(idx);
      int c = m - 1;
      while (c >= 0 && idx[c] == n) idx[c--] = 1;
      if (c < 0) break;
      ++idx[c];
    }
  }
  try {
    for (int k = 1; k <= n; ++k)
      for (const auto& idx : multi)
        if (!close(higher_derivative(rec, backend, k, idx, a), higher_derivative(rec, backend, k, idx, b)))
          return TaylorMatch::Mismatch;
  } catch (const DomainError&) {
    return TaylorMatch::Indeterminate;
  } catch (const PoleError&) {
    return TaylorMatch::Indeterminate;
  }
  return TaylorMatch::Match;
}

ResidualReport recursion_fd_check(const DerivativeRecursion& rec, const MappingBackend& backend, int order,
                                  int points, std::uint64_t seed, double h, double tol) {
  if (order != 2 && order != 3) throw DomainError("finite-difference check covers orders 2 and 3");
  const int n = rec.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.2, 1.2);
  auto shift = [&](int q, double s) {
    VecC e = VecC::Zero(n);
    e(q) = s;
    return e;
  };
  std::vector<double> res;
  int skipped = 0, done = 0;
  while (done < points && skipped < 50 * points) {
    VecC u(n);
    for (int i = 0; i < n; ++i) u(i) = cplx(unif(rng), unif(rng));
    if (backend.pole_distance(u) < 0.2) {
      ++skipped;
      continue;
    }
    std::vector<double> local;
    try {
      for (int k = 1; k <= n; ++k)
        for (int p = 1; p <= n; ++p)
          for (int q = 1; q <= n; ++q) {
            if (order == 2) {
              MatC fd = (backend.jacobian(u + shift(q - 1, h)) - backend.jacobian(u - shift(q - 1, h))) / (2 * h);
              cplx r = higher_derivative(rec, backend, k, {p, q}, u);
              local.push_back(std::abs(r - fd(k - 1, p - 1)) / std::max(1.0, std::abs(r)));
              continue;
            }
            for (int r = 1; r <= n; ++r) {
              auto Hp = backend.hessian(u + shift(r - 1, h)), Hm = backend.hessian(u - shift(r - 1, h));
              cplx fd = (Hp[k - 1](p - 1, q - 1) - Hm[k - 1](p - 1, q - 1)) / (2 * h);
              cplx v = higher_derivative(rec, backend, k, {p, q, r}, u);
              local.push_back(std::abs(v - fd) / std::max(1.0, std::abs(v)));
            }
          }
    } catch (const DomainError&) {
      ++skipped;
      continue;
    } catch (const PoleError&) {
      ++skipped;
      continue;
    }
    res.push_back(*std::max_element(local.begin(), local.end()));
    ++done;
  }
  ResidualReport rep;
  rep.relation = "order " + std::to_string(order) + " derivatives vs central differences";
  rep.samples = done;
  rep.skipped = skipped;
  rep.tol = tol;
  if (done < points) {
    rep.failure = "only " + std::to_string(done) + " usable points";
    rep.max = rep.mean = rep.p95 = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.max = *std::max_element(res.begin(), res.end());
  rep.mean = std::accumulate(res.begin(), res.end(), 0.0) / res.size();
  std::sort(res.begin(), res.end());
  rep.p95 = res[std::size_t(std::ceil(0.95 * res.size())) - 1];
  rep.pass = rep.max < tol;
  return rep;
}

}  // namespace aat

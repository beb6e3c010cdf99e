#include "aat/residual.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aat/errors.hpp"

namespace aat {

Sampler::Sampler(BackendPtr backend, const SamplingOptions& opts)
    : backend_(std::move(backend)), opts_(opts), rng_(opts.seed), unif_(-opts.box, opts.box) {}

VecC Sampler::draw() {
  VecC u(backend_->n());
  for (int i = 0; i < backend_->n(); ++i) {
    double re = unif_(rng_);
    double im = unif_(rng_);
    u(i) = cplx(re, im);
  }
  return u;
}

std::optional<Draw> Sampler::next() {
  const int cap = 10 * std::max(opts_.samples, 1);
  while (skipped_ <= cap) {
    Draw d{draw(), draw()};
    if (backend_->pole_distance(d.u) >= opts_.exclusion && backend_->pole_distance(d.v) >= opts_.exclusion &&
        backend_->pole_distance(d.u + d.v) >= opts_.exclusion)
      return d;
    ++skipped_;
  }
  return std::nullopt;
}

std::vector<cplx> bind_symbols(const RingPtr& ring, const MappingBackend& backend, const VecC& u,
                               const VecC& v, const AlphaMatrix* alpha) {
  const int n = backend.n();
  std::vector<cplx> vals(ring->size(), cplx(std::nan(""), 0.0));
  VecC fu = backend.value(u), fv = backend.value(v);
  MatC Ju = backend.jacobian(u), Jv = backend.jacobian(v);
  std::optional<VecC> fuv;
  cplx theta_u = std::nan(""), theta_v = std::nan("");
  if (alpha) {
    theta_u = theta_v = 0.0;
    for (int k = 0; k < n; ++k)
      for (int p = 0; p < n; ++p) {
        theta_u += double((*alpha)[k][p]) * Ju(k, p);
        theta_v += double((*alpha)[k][p]) * Jv(k, p);
      }
  }
  for (std::size_t i = 0; i < ring->size(); ++i) {
    const std::string& s = ring->name(i);
    if (ring->is_parameter(i)) {
      auto it = backend.parameters().find(s);
      if (it == backend.parameters().end())
        throw StructuralError("parameter '" + s + "' has no numeric value");
      vals[i] = it->second.get_d();
      continue;
    }
    if (s == "theta") {
      vals[i] = theta_u;
      continue;
    }
    int k = 0, p = 0;
    char tag = s[0];
    if ((tag == 'z' || tag == 'w') && std::sscanf(s.c_str() + 1, "%d_%d", &k, &p) == 2) {
      if (k < 1 || k > n || p < 1 || p > n) continue;
      vals[i] = tag == 'z' ? Ju(k - 1, p - 1) : Jv(k - 1, p - 1);
    } else if ((tag == 'x' || tag == 'y' || tag == 'L') && std::sscanf(s.c_str() + 1, "%d", &k) == 1) {
      if (k == 0 && tag != 'L') {
        vals[i] = tag == 'x' ? theta_u : theta_v;
      } else if (k >= 1 && k <= n) {
        if (tag == 'x') vals[i] = fu(k - 1);
        if (tag == 'y') vals[i] = fv(k - 1);
        if (tag == 'L') {
          if (!fuv) fuv = backend.value(u + v);
          vals[i] = (*fuv)(k - 1);
        }
      }
    }
  }
  return vals;
}

double scaled_residual(const MPoly& p, const std::vector<cplx>& values) {
  auto r = evaluate(p, values);
  return std::abs(r.value) / std::max(1.0, r.max_term);
}

ResidualReport residual_check(const std::string& id, const PointResidual& f, BackendPtr backend,
                              const SamplingOptions& opts) {
  ResidualReport rep;
  rep.relation = id;
  rep.tol = opts.tol;
  Sampler sampler(backend, opts);
  std::vector<double> res;
  int extra_skips = 0;
  while (int(res.size()) < opts.samples) {
    auto d = sampler.next();
    if (!d || sampler.skipped() + extra_skips > 10 * opts.samples) {
      rep.failure = "pole-dominated sampling region";
      break;
    }
    std::optional<std::pair<cplx, double>> val;
    try {
      val = f(*d);
    } catch (const PoleError&) {
      val.reset();
    }
    if (!val || !std::isfinite(std::abs(val->first))) {
      ++extra_skips;
      continue;
    }
    res.push_back(std::abs(val->first) / std::max(1.0, val->second));
  }
  rep.samples = int(res.size());
  rep.skipped = sampler.skipped() + extra_skips;
  if (!res.empty()) {
    rep.max = *std::max_element(res.begin(), res.end());
    rep.mean = std::accumulate(res.begin(), res.end(), 0.0) / double(res.size());
    std::vector<double> sorted = res;
    std::sort(sorted.begin(), sorted.end());
    std::size_t idx = std::size_t(std::ceil(0.95 * double(sorted.size()))) - 1;
    rep.p95 = sorted[std::min(idx, sorted.size() - 1)];
  }
  rep.pass = rep.failure.empty() && !res.empty() && rep.p95 < opts.tol;
  return rep;
}

ResidualReport residual_check(const std::string& id, const MPoly& relation, BackendPtr backend,
                              const SamplingOptions& opts, const AlphaMatrix* alpha) {
  const MappingBackend& b = *backend;
  PointResidual f = [&](const Draw& d) -> std::optional<std::pair<cplx, double>> {
    auto vals = bind_symbols(relation.ring(), b, d.u, d.v, alpha);
    auto r = evaluate(relation, vals);
    return std::make_pair(r.value, r.max_term);
  };
  return residual_check(id, f, backend, opts);
}

}  // namespace aat

#include "aat/periods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aat/errors.hpp"

namespace aat {

namespace {

Eigen::VectorXd real_embed(const VecC& p) {
  Eigen::VectorXd r(2 * p.size());
  for (int i = 0; i < p.size(); ++i) {
    r(2 * i) = p(i).real();
    r(2 * i + 1) = p(i).imag();
  }
  return r;
}

double norm(const VecC& p) { return real_embed(p).norm(); }

// Sign fixed so the first non-negligible coordinate points into the right half
// plane; real and imaginary parts below 1e-13 of the norm are set to zero.
VecC canonical_sign(VecC p) {
  const double floor = 1e-13 * norm(p);
  for (int i = 0; i < p.size(); ++i)
    p(i) = cplx(std::abs(p(i).real()) < floor ? 0.0 : p(i).real(), std::abs(p(i).imag()) < floor ? 0.0 : p(i).imag());
  for (int i = 0; i < p.size(); ++i) {
    cplx c = p(i);
    if (std::abs(c) < 1e-9) continue;
    bool flip = std::abs(c.real()) > 1e-9 ? c.real() < 0 : c.imag() < 0;
    return flip ? VecC(-p) : p;
  }
  return p;
}

// Integer generators of the group spanned by `gens`: repeated size reduction
// of each vector against an independent subset of the shorter ones until
// nothing changes.
std::vector<VecC> reduce_generators(std::vector<VecC> gens) {
  for (int iter = 0; iter < 500; ++iter) {
    std::stable_sort(gens.begin(), gens.end(), [](const VecC& a, const VecC& b) { return norm(a) < norm(b); });
    gens.erase(std::remove_if(gens.begin(), gens.end(), [](const VecC& v) { return norm(v) < 1e-7; }), gens.end());
    bool changed = false;
    for (std::size_t i = 1; i < gens.size() && !changed; ++i) {
      std::vector<VecC> indep;
      for (std::size_t j = 0; j < i; ++j)
        if (indep.empty() || lattice_coordinates(indep, gens[j]).second > 1e-7) indep.push_back(gens[j]);
      auto c = lattice_coordinates(indep, gens[i]).first;
      VecC r = gens[i];
      for (std::size_t j = 0; j < indep.size(); ++j) r -= std::round(c[j]) * indep[j];
      if (norm(r) < norm(gens[i]) - 1e-9) {
        gens[i] = r;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return gens;
}

}  // namespace

std::pair<std::vector<double>, double> lattice_coordinates(const std::vector<VecC>& basis, const VecC& p) {
  if (basis.empty()) return {{}, 1.0};
  Eigen::MatrixXd M(2 * p.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) M.col(j) = real_embed(basis[j]);
  Eigen::VectorXd t = real_embed(p);
  Eigen::VectorXd c = M.colPivHouseholderQr().solve(t);
  double res = (M * c - t).norm() / std::max(1e-300, t.norm());
  return {std::vector<double>(c.data(), c.data() + c.size()), res};
}

bool in_lattice(const std::vector<VecC>& basis, const VecC& p, double tol) {
  if (norm(p) < tol) return true;
  auto [c, res] = lattice_coordinates(basis, p);
  if (res > tol) return false;
  for (double x : c)
    if (std::abs(x - std::round(x)) > tol) return false;
  return true;
}

std::optional<std::vector<std::vector<long>>> unimodular_relation(const std::vector<VecC>& basis,
                                                                  const std::vector<VecC>& reference, double tol) {
  if (basis.size() != reference.size() || basis.empty() || basis.size() > 2) return std::nullopt;
  std::vector<std::vector<long>> M;
  for (const auto& b : basis) {
    auto [c, res] = lattice_coordinates(reference, b);
    if (res > tol) return std::nullopt;
    std::vector<long> row;
    for (double x : c) {
      if (std::abs(x - std::round(x)) > tol) return std::nullopt;
      row.push_back(std::lround(x));
    }
    M.push_back(row);
  }
  long det = M.size() == 1 ? M[0][0] : M[0][0] * M[1][1] - M[0][1] * M[1][0];
  if (std::abs(det) != 1) return std::nullopt;
  return M;
}

std::optional<VecC> newton_preimage(const MappingBackend& backend, const VecC& target, VecC b, int max_iter) {
  const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  try {
    for (int it = 0; it < max_iter; ++it) {
      VecC f = backend.value(b) - target;
      if (f.cwiseAbs().maxCoeff() < 1e-13 * scale) return b;
      MatC J = backend.jacobian(b);
      VecC step = J.fullPivLu().solve(f);
      if (!step.allFinite()) return std::nullopt;
      double s = norm(step);
      if (s > 1.0) step /= s;
      b -= step;
    }
  } catch (const PoleError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

double period_residual(const MappingBackend& backend, const VecC& p, int samples, std::uint64_t seed, double box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-box, box);
  double worst = 0;
  int done = 0, tries = 0;
  while (done < samples && tries < 20 * samples) {
    ++tries;
    VecC u(backend.n());
    for (int i = 0; i < backend.n(); ++i) u(i) = cplx(unif(rng), unif(rng));
    if (backend.pole_distance(u) < 0.05 || backend.pole_distance(u + p) < 0.05) continue;
    try {
      VecC a = backend.value(u), b = backend.value(u + p);
      for (int k = 0; k < backend.n(); ++k) worst = std::max(worst, std::abs(b(k) - a(k)) / std::max(1.0, std::abs(a(k))));
      ++done;
    } catch (const PoleError&) {
    }
  }
  return done == samples ? worst : std::numeric_limits<double>::infinity();
}

PeriodResult detect_period(BackendPtr backend, const PeriodOptions& opts) {
  const MappingBackend& B = *backend;
  const int n = B.n();
  PeriodResult out;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  VecC a(n);
  for (int tries = 0;; ++tries) {
    for (int i = 0; i < n; ++i) a(i) = cplx(unif(rng), unif(rng));
    if (B.pole_distance(a) < 0.3) continue;
    try {
      if (std::abs(B.jacobian(a).determinant()) > 1e-3) break;
    } catch (const PoleError&) {
    }
    if (tries > 1000) throw StageError("period", "no regular base point found");
  }
  const VecC target = B.value(a);
  const MatC Ja = B.jacobian(a);
  const double jscale = std::max(1.0, Ja.cwiseAbs().maxCoeff());

  std::vector<VecC> raw;
  const int g = std::max(2, opts.grid);
  const int cells = 2 * n;
  std::vector<int> idx(cells, 0);
  while (true) {
    VecC off(n);
    for (int i = 0; i < n; ++i) {
      double re = -opts.box + 2 * opts.box * idx[2 * i] / double(g - 1);
      double im = -opts.box + 2 * opts.box * idx[2 * i + 1] / double(g - 1);
      off(i) = cplx(re, im);
    }
    ++out.seeds;
    if (auto b = newton_preimage(B, target, a + off)) {
      ++out.converged;
      try {
        MatC Jb = B.jacobian(*b);
        VecC p = *b - a;
        if ((Jb - Ja).cwiseAbs().maxCoeff() < 1e-7 * jscale && norm(p) > 1e-6) {
          ++out.witnesses;
          bool dup = false;
          for (const auto& q : raw)
            if (norm(q - p) < 1e-6) dup = true;
          if (!dup) raw.push_back(p);
        }
      } catch (const PoleError&) {
      }
    }
    int c = cells - 1;
    while (c >= 0 && idx[c] == g - 1) idx[c--] = 0;
    if (c < 0) break;
    ++idx[c];
  }
  std::stable_sort(raw.begin(), raw.end(), [](const VecC& x, const VecC& y) { return norm(x) < norm(y); });

  std::vector<VecC> verified;
  std::vector<std::pair<VecC, double>> checked;
  for (const auto& p : raw) {
    double r = period_residual(B, p, opts.samples, opts.seed + 1, 1.2);
    if (r < opts.tol) {
      verified.push_back(p);
      checked.emplace_back(p, r);
    }
  }
  std::vector<VecC> span, extra;
  for (const auto& p : verified) {
    std::vector<VecC> trial = span;
    trial.push_back(p);
    auto fit = lattice_coordinates(span, p);
    if (fit.second > 1e-6 && int(span.size()) >= 2 * n) {
      extra.push_back(p);
      continue;
    }
    span = reduce_generators(trial);
  }
  auto make = [&](const VecC& p0) {
    PeriodCandidate c;
    c.p = canonical_sign(p0);
    c.a = a;
    c.b = a + c.p;
    c.residual = period_residual(B, c.p, opts.samples, opts.seed + 1, 1.2);
    c.pass = c.residual < opts.tol;
    if (const Lattice* lat = B.lattice()) {
      std::vector<VecC> ref(2, VecC(1));
      ref[0](0) = 2.0 * lat->omega1;
      ref[1](0) = 2.0 * lat->omega2;
      VecC first(1);
      first(0) = c.p(0);
      auto [co, res] = lattice_coordinates(ref, first);
      if (res < 1e-6)
        c.note = "u1 part = " + std::to_string(std::lround(co[0])) + "*2*omega1 + " + std::to_string(std::lround(co[1])) +
                 "*2*omega2";
    }
    return c;
  };
  for (const auto& p : span) out.basis.push_back(make(p));
  for (const auto& p : extra) out.extra.push_back(make(p));
  return out;
}

ResidualReport zeta_shift_check(const Lattice& lat, int i, int samples, std::uint64_t seed, double tol) {
  const cplx w = i == 1 ? lat.omega1 : lat.omega2, eta = i == 1 ? lat.eta1 : lat.eta2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.2, 1.2);
  std::vector<double> res;
  while (int(res.size()) < samples) {
    cplx u(unif(rng), unif(rng));
    if (lattice_distance(lat, u) < 0.05 || lattice_distance(lat, u + 2.0 * w) < 0.05) continue;
    res.push_back(std::abs(weierstrass_zeta(lat, u + 2.0 * w) - weierstrass_zeta(lat, u) - 2.0 * eta));
  }
  ResidualReport rep;
  rep.relation = "zeta(u + 2*omega" + std::to_string(i) + ") = zeta(u) + 2*eta" + std::to_string(i);
  rep.samples = samples;
  rep.tol = tol;
  rep.max = *std::max_element(res.begin(), res.end());
  rep.mean = std::accumulate(res.begin(), res.end(), 0.0) / res.size();
  std::sort(res.begin(), res.end());
  rep.p95 = res[std::size_t(std::ceil(0.95 * res.size())) - 1];
  rep.pass = rep.max < tol;
  return rep;
}

ResidualReport sigma_shift_check(const Lattice& lat, int i, int samples, std::uint64_t seed, double tol) {
  const cplx w = i == 1 ? lat.omega1 : lat.omega2, eta = i == 1 ? lat.eta1 : lat.eta2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.2, 1.2);
  std::vector<double> res;
  while (int(res.size()) < samples) {
    cplx u(unif(rng), unif(rng));
    cplx expect = -weierstrass_sigma(lat, u) * std::exp(2.0 * eta * (u + w));
    if (std::abs(expect) < 1e-6) continue;
    res.push_back(std::abs(weierstrass_sigma(lat, u + 2.0 * w) - expect) / std::abs(expect));
  }
  ResidualReport rep;
  rep.relation = "sigma(u + 2*omega" + std::to_string(i) + ") = -sigma(u)*exp(2*eta" + std::to_string(i) +
                 "*(u + omega" + std::to_string(i) + "))";
  rep.samples = samples;
  rep.tol = tol;
  rep.max = *std::max_element(res.begin(), res.end());
  rep.mean = std::accumulate(res.begin(), res.end(), 0.0) / res.size();
  std::sort(res.begin(), res.end());
  rep.p95 = res[std::size_t(std::ceil(0.95 * res.size())) - 1];
  rep.pass = rep.max < tol;
  return rep;
}

}  // namespace aat

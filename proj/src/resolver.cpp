#include "aat/resolver.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "aat/errors.hpp"
#include "aat/numerics.hpp"
#include "aat/parse.hpp"
#include "aat/poly_algo.hpp"

namespace aat {

namespace {

// Exact square root of a rational function, when it exists over Q.
std::optional<RatFn> ratfn_sqrt(const RatFn& f) {
  if (f.is_zero()) return f;
  auto n = poly_sqrt(f.num());
  if (!n) return std::nullopt;
  auto d = poly_sqrt(f.den());
  if (!d) return std::nullopt;
  return RatFn(*n, *d);
}

std::vector<cplx> blank_values(const RingPtr& ring, const MappingBackend& b) {
  std::vector<cplx> vals(ring->size(), cplx(std::nan(""), 0.0));
  for (std::size_t i = ring->num_variables(); i < ring->size(); ++i) {
    auto it = b.parameters().find(ring->name(i));
    if (it != b.parameters().end()) vals[i] = it->second.get_d();
  }
  return vals;
}

cplx theta_value(const MatC& J, const AlphaMatrix& alpha) {
  cplx t = 0.0;
  for (int k = 0; k < J.rows(); ++k)
    for (int p = 0; p < J.cols(); ++p) t += double(alpha[k][p]) * J(k, p);
  return t;
}

std::string divisor_text(const MPoly& den, std::size_t x1, std::size_t y1) {
  if (den.is_constant()) return "none";
  std::vector<MPoly> factors = candidate_factors(den, x1);
  for (auto& f : candidate_factors(content_in(den, x1), y1)) factors.push_back(f);
  std::string out;
  for (const auto& f : factors) {
    std::string piece;
    const auto& t = f.terms();
    if (t.size() == 2 && t[0].coeff == Rat(1) && t[1].coeff == Rat(-1))
      piece = MPoly::monomial(f.ring(), t[0].mono, Rat(1)).to_string() + " = " +
              MPoly::monomial(f.ring(), t[1].mono, Rat(1)).to_string();
    else
      piece = f.to_string() + " = 0";
    out += (out.empty() ? "" : " or ") + piece;
  }
  return out.empty() ? "none" : out;
}

// Relative mismatch of a rational function against a reference value.
std::optional<std::pair<cplx, double>> relative_gap(const RatFn& f, const std::vector<cplx>& vals, cplx ref) {
  auto den = evaluate(f.den(), vals);
  if (std::abs(den.value) < 1e-8 * std::max(1.0, den.max_term)) return std::nullopt;  // on the divisor
  cplx v = evaluate(f.num(), vals).value / den.value;
  return std::make_pair(v - ref, std::abs(ref));
}

// Lowest-degree relation E(y_k; x) with rational coefficients vanishing on
// sampled pairs (Phi(u), Phi(-u)): the one-dimensional null space of the
// monomial evaluation matrix, rounded by continued fractions.
std::optional<MPoly> interpolate_relation(const RingPtr& ring, const MappingBackend& b, int k, std::uint64_t seed,
                                          int max_degree = 4) {
  const int n = b.n();
  std::vector<std::string> names{y_name(k)};
  for (int i = 1; i <= n; ++i) names.push_back(x_name(i));
  const int m = int(names.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.2, 1.2);
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<std::vector<int>> monos;
    std::vector<int> e(m, 0);
    std::function<void(int, int)> gen = [&](int i, int left) {
      if (i == m) {
        monos.push_back(e);
        return;
      }
      for (int a = 0; a <= left; ++a) {
        e[i] = a;
        gen(i + 1, left - a);
      }
      e[i] = 0;
    };
    gen(0, d);
    const int cols = int(monos.size()), rows = cols + 20;
    MatC M(rows, cols);
    for (int r = 0; r < rows;) {
      VecC u(n);
      for (int i = 0; i < n; ++i) u(i) = cplx(unif(rng), unif(rng));
      if (b.pole_distance(u) < 0.1 || b.pole_distance(-u) < 0.1) continue;
      VecC fu, fm;
      try {
        fu = b.value(u);
        fm = b.value(-u);
      } catch (const PoleError&) {
        continue;
      }
      std::vector<cplx> vals{fm(k - 1)};
      for (int i = 0; i < n; ++i) vals.push_back(fu(i));
      for (int c = 0; c < cols; ++c) {
        cplx t = 1.0;
        for (int i = 0; i < m; ++i) t *= std::pow(vals[i], monos[c][i]);
        M(r, c) = t;
      }
      M.row(r) /= M.row(r).cwiseAbs().maxCoeff();
      ++r;
    }
    Eigen::VectorXd scale(cols);
    for (int c = 0; c < cols; ++c) {
      scale(c) = M.col(c).norm();
      M.col(c) /= scale(c);
    }
    Eigen::JacobiSVD<MatC> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(cols - 1) > 1e-10 * sv(0)) continue;
    if (cols > 1 && sv(cols - 2) < 1e-7 * sv(0)) return std::nullopt;  // several relations; not canonical
    VecC v = svd.matrixV().col(cols - 1);
    for (int c = 0; c < cols; ++c) v(c) /= scale(c);
    int piv = 0;
    for (int c = 1; c < cols; ++c)
      if (std::abs(v(c)) > std::abs(v(piv))) piv = c;
    v /= v(piv);
    std::string text;
    for (int c = 0; c < cols; ++c) {
      if (std::abs(v(c)) < 1e-9) continue;
      if (std::abs(v(c).imag()) > 1e-7) return std::nullopt;
      auto q = reconstruct_rational(v(c).real(), 1000, 1e-7);
      if (!q) return std::nullopt;
      text += " + (" + to_string(*q) + ")";
      for (int i = 0; i < m; ++i)
        if (monos[c][i]) text += "*" + names[i] + "^" + std::to_string(monos[c][i]);
    }
    MPoly E = primitive_integer(parse_poly(text.substr(3), ring));
    if (!E.contains(y_name(k))) return std::nullopt;
    return E;
  }
  return std::nullopt;
}

}  // namespace

NegationRelation derive_negation(const AATSystem& sys, BackendPtr backend, const SamplingOptions& opts) {
  const int n = sys.n;
  const auto& ring = sys.ring;
  NegationRelation out;
  auto zero = backend->value_at_zero();
  out.mode = zero ? "value-at-zero" : "leading-coefficient";
  for (int k = 1; k <= n; ++k) {
    const MPoly& G = sys.polys[k - 1];
    std::size_t L = ring->index(l_name(k));
    MPoly D = zero ? substitute_value(G, L, (*zero)[k - 1]) : leading_coefficient_in(G, L);
    if (D.is_zero()) throw StageError("negation", "D_" + std::to_string(k) + " vanishes identically");
    out.D.push_back(primitive_integer(D));
  }
  const MappingBackend& b = *backend;
  // Residual of a candidate E on (x; y) = (Phi(u); Phi(-u)).
  auto vet = [&](const MPoly& f) {
    PointResidual pr = [&](const Draw& d) -> std::optional<std::pair<cplx, double>> {
      auto vals = blank_values(ring, b);
      VecC fu = b.value(d.u), fm = b.value(-d.u);
      for (int i = 1; i <= n; ++i) {
        vals[ring->index(x_name(i))] = fu(i - 1);
        vals[ring->index(y_name(i))] = fm(i - 1);
      }
      auto r = evaluate(f, vals);
      return std::make_pair(r.value, r.max_term);
    };
    return residual_check(f.to_string(), pr, backend, opts);
  };
  for (int k = 1; k <= n; ++k) {
    std::size_t yk = ring->index(y_name(k));
    std::vector<std::size_t> others;
    for (int j = 1; j <= n; ++j)
      if (j != k) others.push_back(ring->index(y_name(j)));
    std::optional<MPoly> E;
    ResidualReport rep;
    for (const auto& q : eliminate_symbols(out.D, others)) {
      if (!q.contains(yk)) continue;
      for (const auto& f : candidate_factors(q, yk)) {
        rep = vet(f);
        if (rep.pass) {
          E = f;
          break;
        }
      }
      if (E) break;
    }
    std::string source = "elimination";
    if (!E) {
      // D carries no information on y_k (the pole balance sits below the
      // leading order); fall back to a relation fitted on samples.
      if (auto f = interpolate_relation(ring, b, k, opts.seed + 7919 * k)) {
        rep = vet(*f);
        if (rep.pass) {
          E = f;
          source = "interpolation";
        }
      }
    }
    if (!E) throw StageError("negation", "no vanishing relation for " + y_name(k));
    out.E.push_back(*E);
    out.E_source.push_back(source);
    out.residuals.push_back(rep);
  }
  return out;
}

AdditionFormula resolve_addition(const AATSystem& sys, const VarietySpec& variety, BackendPtr backend,
                                 const SamplingOptions& opts, double tol) {
  AdditionFormula out;
  if (sys.n != 1) {
    out.status = "unsupported: symbolic resolution needs n = 1 (numeric verification only)";
    return out;
  }
  const auto& ring = sys.ring;
  const std::size_t L = ring->index("L1"), th = ring->index("theta"), x0 = ring->index("x0"),
                    y0 = ring->index("y0"), x1 = ring->index("x1"), y1 = ring->index("y1");
  const MPoly& G = sys.polys[0];
  const int deg = G.degree(L);
  const MPoly X0 = MPoly::symbol(ring, x0), Y0 = MPoly::symbol(ring, y0), Y1 = MPoly::symbol(ring, y1);
  auto at_x = [&](const MPoly& p) { return compose(p, th, X0); };
  auto at_y = [&](const MPoly& p) { return compose(compose(p, x1, Y1), th, Y0); };

  std::vector<RatFn> candidates;
  if (deg == 1) {
    candidates.push_back(-RatFn(coefficient_of(G, L, 0), coefficient_of(G, L, 1)));
  } else if (deg == 2) {
    MPoly A = coefficient_of(G, L, 2), B = coefficient_of(G, L, 1), C = coefficient_of(G, L, 0);
    RatFn disc(B * B - A * C.scaled(Rat(4)));
    std::optional<RatFn> root;
    if (variety.h == 1) {
      root = ratfn_sqrt(disc);
    } else if (variety.h == 2) {
      const MPoly& V = variety.V;
      MPoly a = coefficient_of(V, th, 2), bb = coefficient_of(V, th, 1), c = coefficient_of(V, th, 0);
      // theta + b/(2a) squares to F = (b^2 - 4ac)/(4a^2).
      RatFn F(bb * bb - a * c.scaled(Rat(4)), (a * a).scaled(Rat(4)));
      RatFn shift(bb, a.scaled(Rat(2)));
      RatFn Fx(at_x(F.num()), at_x(F.den())), Fy(at_y(F.num()), at_y(F.den()));
      RatFn Xs = RatFn(X0) + RatFn(at_x(shift.num()), at_x(shift.den()));
      RatFn Ys = RatFn(Y0) + RatFn(at_y(shift.num()), at_y(shift.den()));
      if (auto t = ratfn_sqrt(disc)) root = *t;
      else if (auto s = ratfn_sqrt(disc / (Fx * Fy))) root = *s * Xs * Ys;
    }
    if (!root) {
      out.status = variety.h > 2 ? "unresolved: extension degree > 2"
                                 : "unresolved: extension degree > 1 ansatz insufficient";
      return out;
    }
    RatFn twoA(A.scaled(Rat(2)));
    candidates.push_back((RatFn(-B) + *root) / twoA);
    candidates.push_back((RatFn(-B) - *root) / twoA);
  } else {
    out.status = "unresolved: degree " + std::to_string(deg) + " in L1";
    return out;
  }

  const MappingBackend& b = *backend;
  const AlphaMatrix& alpha = variety.alpha;
  std::size_t pick = 0;
  if (candidates.size() == 2) {
    Sampler sampler(backend, opts);
    double best[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    // A single clean sample decides; more are drawn only if it sits near the divisor.
    for (int tries = 0; tries < 10 && !std::isfinite(std::min(best[0], best[1])); ++tries) {
      auto d = sampler.next();
      if (!d) break;
      try {
        auto vals = bind_symbols(ring, b, d->u, d->v, &alpha);
        for (int i = 0; i < 2; ++i)
          if (auto g = relative_gap(candidates[i], vals, vals[L])) best[i] = std::abs(g->first) / std::max(1.0, g->second);
      } catch (const PoleError&) {
      }
    }
    pick = best[1] < best[0] ? 1 : 0;
    out.branch = pick == 0 ? "+" : "-";
  }
  RatFn R1 = candidates[pick];

  // theta(u+v) = alpha * d/du phi(u+v), with dtheta/du = -V_x z / V_theta at the x slot.
  RatFn r = express_derivative(variety, 1, 1);
  RatFn rx(at_x(r.num()), at_x(r.den()));
  RatFn Vt(at_x(derivative(variety.V, th))), Vx(at_x(derivative(variety.V, x1)));
  RatFn dtheta = -(Vx * rx) / Vt;
  RatFn R0 = (derivative(R1, x0) * dtheta + derivative(R1, x1) * rx) * RatFn::constant(ring, Rat(alpha[0][0]));

  out.R = {R0, R1};
  out.divisor = divisor_text(R1.den(), x1, y1);

  SamplingOptions o = opts;
  o.tol = tol;
  out.agreement = residual_check(
      "R1 vs phi(u+v)",
      [&](const Draw& d) {
        auto vals = bind_symbols(ring, b, d.u, d.v, &alpha);
        return relative_gap(R1, vals, vals[L]);
      },
      backend, o);
  out.theta_agreement = residual_check(
      "R0 vs theta(u+v)",
      [&](const Draw& d) {
        auto vals = bind_symbols(ring, b, d.u, d.v, &alpha);
        return relative_gap(R0, vals, theta_value(b.jacobian(d.u + d.v), alpha));
      },
      backend, o);
  out.resolved = true;
  out.status = "resolved";
  return out;
}

bool VarietyPoint::finite() const {
  if (!theta) return false;
  for (auto& c : x)
    if (!c) return false;
  return true;
}

VarietyPoint point_at(const MappingBackend& backend, const AlphaMatrix& alpha, const VecC& u) {
  VarietyPoint p;
  p.u = u;
  try {
    VecC f = backend.value(u);
    MatC J = backend.jacobian(u);
    p.theta = theta_value(J, alpha);
    for (int k = 0; k < backend.n(); ++k) p.x.push_back(f(k));
  } catch (const PoleError&) {
    p.theta.reset();
    p.x.assign(backend.n(), std::nullopt);
  }
  return p;
}

VarietyPoint identity_point(const MappingBackend& backend, const AlphaMatrix& alpha) {
  return point_at(backend, alpha, VecC::Zero(backend.n()));
}

VarietyPoint point_add(const VarietyPoint& a, const VarietyPoint& b, const MappingBackend& backend,
                       const AlphaMatrix& alpha) {
  if (!a.u || !b.u) throw DomainError("backend mode needs pre-images");
  return point_at(backend, alpha, *a.u + *b.u);
}

VarietyPoint point_sub(const VarietyPoint& a, const VarietyPoint& b, const MappingBackend& backend,
                       const AlphaMatrix& alpha) {
  if (!a.u || !b.u) throw DomainError("backend mode needs pre-images");
  return point_at(backend, alpha, *a.u - *b.u);
}

VarietyPoint point_add(const VarietyPoint& a, const VarietyPoint& b, const AdditionFormula& f, const RingPtr& ring) {
  if (!f.resolved) throw DomainError("formula mode needs a resolved addition formula");
  if (!a.finite() || !b.finite()) throw DomainError("formula mode needs finite points");
  std::vector<cplx> vals(ring->size(), cplx(std::nan(""), 0.0));
  vals[ring->index("x0")] = *a.theta;
  vals[ring->index("y0")] = *b.theta;
  vals[ring->index("x1")] = *a.x[0];
  vals[ring->index("y1")] = *b.x[0];
  VarietyPoint out;
  std::vector<cplx> coords;
  for (const auto& R : f.R) {
    auto den = evaluate(R.den(), vals);
    if (std::abs(den.value) < 1e-8 * std::max(1.0, den.max_term)) throw DomainError("divisor degeneracy");
    coords.push_back(evaluate(R.num(), vals).value / den.value);
  }
  out.theta = coords[0];
  out.x.push_back(coords[1]);
  return out;
}

double point_distance(const VarietyPoint& a, const VarietyPoint& b) {
  const double inf = std::numeric_limits<double>::infinity();
  auto one = [&](const std::optional<cplx>& p, const std::optional<cplx>& q) {
    if (!p && !q) return 0.0;
    if (!p || !q) return inf;
    return std::abs(*p - *q) / std::max(1.0, std::abs(*q));
  };
  if (a.x.size() != b.x.size()) return inf;
  double d = one(a.theta, b.theta);
  for (std::size_t i = 0; i < a.x.size(); ++i) d = std::max(d, one(a.x[i], b.x[i]));
  return d;
}

double closure_residual(const MPoly& V, const VarietyPoint& p) {
  if (!p.finite()) throw DomainError("closure residual needs a finite point");
  const auto& ring = V.ring();
  std::vector<cplx> vals(ring->size(), cplx(std::nan(""), 0.0));
  vals[ring->index("theta")] = *p.theta;
  for (std::size_t k = 0; k < p.x.size(); ++k) vals[ring->index(x_name(int(k) + 1))] = *p.x[k];
  return scaled_residual(V, vals);
}

std::vector<ResidualReport> group_law_checks(BackendPtr backend, const AlphaMatrix& alpha, const SamplingOptions& opts,
                                             int triples, double tol) {
  SamplingOptions o = opts;
  o.samples = triples;
  o.tol = tol;
  const MappingBackend& b = *backend;
  const VarietyPoint O = identity_point(b, alpha);
  std::mt19937_64 rng(opts.seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_real_distribution<double> unif(-opts.box, opts.box);
  auto third = [&]() {
    VecC w(b.n());
    for (int i = 0; i < b.n(); ++i) w(i) = cplx(unif(rng), unif(rng));
    return point_at(b, alpha, w);
  };
  auto gap = [](double d) -> std::optional<std::pair<cplx, double>> { return std::make_pair(cplx(d, 0.0), 1.0); };
  std::vector<ResidualReport> out;
  out.push_back(residual_check(
      "commutativity",
      [&](const Draw& d) {
        auto P = point_at(b, alpha, d.u), Q = point_at(b, alpha, d.v);
        return gap(point_distance(point_add(P, Q, b, alpha), point_add(Q, P, b, alpha)));
      },
      backend, o));
  rng.seed(opts.seed ^ 0x5851f42d4c957f2dULL);
  out.push_back(residual_check(
      "associativity",
      [&](const Draw& d) {
        auto P = point_at(b, alpha, d.u), Q = point_at(b, alpha, d.v), W = third();
        return gap(point_distance(point_add(point_add(P, Q, b, alpha), W, b, alpha),
                                  point_add(P, point_add(Q, W, b, alpha), b, alpha)));
      },
      backend, o));
  out.push_back(residual_check(
      "identity",
      [&](const Draw& d) {
        auto P = point_at(b, alpha, d.u);
        return gap(point_distance(point_add(P, O, b, alpha), P));
      },
      backend, o));
  out.push_back(residual_check(
      "inverse",
      [&](const Draw& d) {
        auto P = point_at(b, alpha, d.u), Q = point_at(b, alpha, d.v);
        double inv = point_distance(point_add(P, point_sub(O, P, b, alpha), b, alpha), O);
        double round = point_distance(point_add(point_sub(P, Q, b, alpha), Q, b, alpha), P);
        return gap(std::max(inv, round));
      },
      backend, o));
  return out;
}

}  // namespace aat

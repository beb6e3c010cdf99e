#include <doctest.h>

#include <random>

#include "aat/errors.hpp"
#include "aat/resolver.hpp"
#include "support.hpp"

using namespace aat;
using testsupport::P;

namespace {

struct Pipeline {
  ProblemSpec spec;
  AATSystem sys;
  BackendPtr backend;
  EliminationOptions opts;
  Derivation d;
  VarietySpec variety;
  explicit Pipeline(const std::string& family)
      : spec(builtin_problem(family)),
        sys(make_system(spec)),
        backend(make_backend(spec.family, spec.params, spec.phi)),
        opts(elimination_options(spec.options)),
        d(derive_first_order(sys, backend, opts)),
        variety(find_primitive_element(sys, d, backend, opts.sampling)) {}
};

cplx eval_at(const RatFn& f, const std::map<std::string, cplx>& at) {
  const auto& ring = f.num().ring();
  std::vector<cplx> vals(ring->size(), cplx(std::nan(""), 0.0));
  for (const auto& [name, v] : at) vals[ring->index(name)] = v;
  return evaluate(f, vals);
}

VarietyPoint finite_point(cplx theta, cplx x) {
  VarietyPoint p;
  p.theta = theta;
  p.x = {x};
  return p;
}

}  // namespace

TEST_CASE("negation relations") {
  SUBCASE("exp: value at zero") {
    Pipeline f("exp");
    auto neg = derive_negation(f.sys, f.backend, f.opts.sampling);
    CHECK(neg.mode == "value-at-zero");
    REQUIRE(neg.E.size() == 1);
    CHECK(neg.E[0] == P(f.sys.ring, "x1*y1 - 1"));
    CHECK(neg.residuals[0].pass);
  }
  SUBCASE("wp: pole at zero uses the leading coefficient") {
    Pipeline f("weierstrass");
    auto neg = derive_negation(f.sys, f.backend, f.opts.sampling);
    CHECK(neg.mode == "leading-coefficient");
    REQUIRE(neg.E.size() == 1);
    CHECK(neg.E[0] == P(f.sys.ring, "x1 - y1"));
    CHECK(neg.residuals[0].pass);
  }
}

TEST_CASE("addition formula for exp") {
  Pipeline f("exp");
  auto form = resolve_addition(f.sys, f.variety, f.backend, f.opts.sampling);
  REQUIRE(form.resolved);
  const auto& ring = form.R[1].num().ring();
  CHECK(form.R[1] == RatFn(P(ring, "x1*y1")));
  CHECK(form.R[0] == RatFn(P(ring, "x1*y1")));
  CHECK(form.agreement.pass);

  auto six = point_add(finite_point(2, 2), finite_point(3, 3), form, ring);
  CHECK(point_distance(six, finite_point(6, 6)) < 1e-14);

  VecC u(1), v(1);
  u(0) = std::log(6.0);
  v(0) = std::log(3.0);
  auto a = point_at(*f.backend, f.variety.alpha, u), b = point_at(*f.backend, f.variety.alpha, v);
  CHECK(point_distance(point_sub(a, b, *f.backend, f.variety.alpha), finite_point(2, 2)) < 1e-12);
}

TEST_CASE("addition formula for lemniscatic wp against the chord construction") {
  Pipeline f("weierstrass");
  auto form = resolve_addition(f.sys, f.variety, f.backend, f.opts.sampling);
  REQUIRE(form.resolved);
  CHECK(form.branch.size() == 1);
  CHECK(form.divisor == "x1 = y1");
  CHECK(form.agreement.pass);
  CHECK(form.theta_agreement.pass);

  // Independent oracle: the third intersection of the chord through two
  // points of theta^2 = 4 x^3 - 4 x, reflected.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-2, 2);
  for (int i = 0; i < 40; ++i) {
    cplx x(unif(rng), unif(rng)), y(unif(rng), unif(rng));
    cplx tx = std::sqrt(4.0 * x * x * x - 4.0 * x), ty = std::sqrt(4.0 * y * y * y - 4.0 * y);
    if (i % 2) ty = -ty;
    if (std::abs(x - y) < 0.1) continue;
    cplx m = (tx - ty) / (x - y);
    cplx x3 = m * m / 4.0 - x - y;
    cplx t3 = -(tx + m * (x3 - x));
    std::map<std::string, cplx> at{{"x0", tx}, {"x1", x}, {"y0", ty}, {"y1", y}};
    cplx r1 = eval_at(form.R[1], at), r0 = eval_at(form.R[0], at);
    CHECK(std::abs(r1 - x3) < 1e-9 * std::max(1.0, std::abs(x3)));
    CHECK(std::abs(r0 - t3) < 1e-9 * std::max(1.0, std::abs(t3)));

    auto s = point_add(finite_point(tx, x), finite_point(ty, y), form, f.variety.V.ring());
    CHECK(closure_residual(f.variety.V, s) < 1e-10);
  }

  cplx x(0.3, 0.2);
  cplx t = std::sqrt(4.0 * x * x * x - 4.0 * x);
  CHECK_THROWS_AS(point_add(finite_point(t, x), finite_point(t, x), form, f.variety.V.ring()), DomainError);
}

TEST_CASE("formula mode agrees with backend mode") {
  Pipeline f("weierstrass");
  auto form = resolve_addition(f.sys, f.variety, f.backend, f.opts.sampling);
  REQUIRE(form.resolved);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int done = 0;
  while (done < 20) {
    VecC u(1), v(1);
    u(0) = cplx(unif(rng), unif(rng));
    v(0) = cplx(unif(rng), unif(rng));
    if (f.backend->pole_distance(u) < 0.2 || f.backend->pole_distance(v) < 0.2 ||
        f.backend->pole_distance(u + v) < 0.2 || std::abs(u(0) - v(0)) < 0.2 || std::abs(u(0) + v(0)) < 0.2)
      continue;
    auto a = point_at(*f.backend, f.variety.alpha, u), b = point_at(*f.backend, f.variety.alpha, v);
    CHECK(point_distance(point_add(a, b, form, f.variety.V.ring()), point_add(a, b, *f.backend, f.variety.alpha)) <
          1e-8);
    ++done;
  }
}

TEST_CASE("an inconsistent degree 2 system stays unresolved") {
  Pipeline f("weierstrass");
  AATSystem bad = f.sys;
  bad.polys[0] = P(bad.ring, "L1^2 - x1*y1 - 1");
  auto form = resolve_addition(bad, f.variety, f.backend, f.opts.sampling);
  CHECK_FALSE(form.resolved);
  CHECK(form.status.rfind("unresolved", 0) == 0);
}

TEST_CASE("symbolic resolution is limited to one variable") {
  Pipeline f("singular2-case3");
  auto form = resolve_addition(f.sys, f.variety, f.backend, f.opts.sampling);
  CHECK_FALSE(form.resolved);
  CHECK(form.status.rfind("unsupported", 0) == 0);
}

TEST_CASE("group law on the variety") {
  for (const char* name : {"exp", "weierstrass", "singular2-case3"}) {
    CAPTURE(name);
    Pipeline f(name);
    auto reps = group_law_checks(f.backend, f.variety.alpha, f.opts.sampling);
    REQUIRE(reps.size() == 4);
    for (const auto& r : reps) {
      CAPTURE(r.relation);
      CHECK(r.pass);
    }
    auto e = identity_point(*f.backend, f.variety.alpha);
    if (e.finite()) CHECK(closure_residual(f.variety.V, e) < 1e-9);
  }
}

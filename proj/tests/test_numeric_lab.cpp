#include <doctest.h>

#include <random>

#include "aat/errors.hpp"
#include "aat/periods.hpp"
#include "aat/recursion.hpp"
#include "support.hpp"

using namespace aat;
using testsupport::P;

namespace {

// Known first-order relations, so the tests do not rerun the elimination.
Derivation relations(const RingPtr& ring, const std::vector<std::string>& polys) {
  Derivation d;
  int n = polys.size() == 1 ? 1 : 2;
  for (int k = 1; k <= n; ++k)
    for (int p = 1; p <= n; ++p) d.relations.emplace_back(k, p, P(ring, polys[(k - 1) * n + p - 1]));
  return d;
}

struct Family {
  std::string name;
  BackendPtr backend;
  RingPtr ring;
  Derivation d;
};

Family family(const std::string& name) {
  auto spec = builtin_problem(name);
  Family f{name, make_backend(spec.family, spec.params, spec.phi), spec.ring, {}};
  if (name == "exp") f.d = relations(f.ring, {"z1_1 - x1"});
  if (name == "weierstrass") f.d = relations(f.ring, {"z1_1^2 - 4*x1^3 + 4*x1"});
  if (name == "singular2-case1") f.d = relations(f.ring, {"z1_1 - 1", "z1_2", "z2_1", "z2_2 - 1"});
  if (name == "singular2-case4") f.d = relations(f.ring, {"z1_1^2 - 4*x1^3 + 4*x1", "z1_2", "z2_1 - x1", "z2_2 - 1"});
  return f;
}

VecC unit(int n, int p, double h) {
  VecC e = VecC::Zero(n);
  e(p) = h;
  return e;
}

}  // namespace

TEST_CASE("lemniscatic lattice invariants") {
  Lattice lat = make_lattice(4.0, 0.0);
  CHECK(std::abs(weierstrass_p(lat, lat.omega1) - 1.0) < 1e-10);
  CHECK((lat.omega2 / lat.omega1).imag() > 0);
  for (int i = 1; i <= 2; ++i) {
    CHECK(zeta_shift_check(lat, i, 50, 3).pass);
    CHECK(sigma_shift_check(lat, i, 50, 3).pass);
  }
}

TEST_CASE("symbolic second derivatives") {
  auto w = family("weierstrass");
  DerivativeRecursion rw(w.d, w.ring, 1);
  CHECK(rw.symbolic(1, {1, 1}) == RatFn(P(w.ring, "6*x1^2 - 2")));
  CHECK(rw.symbolic(1, {1, 1, 1}) == RatFn(P(w.ring, "12*x1*z1_1")));

  auto e = family("exp");
  DerivativeRecursion re(e.d, e.ring, 1);
  VecC u(1);
  u(0) = cplx(0.3, -0.2);
  CHECK(std::abs(higher_derivative(re, *e.backend, 1, {1, 1}, u) - std::exp(u(0))) < 1e-12);

  auto a = family("singular2-case1");
  DerivativeRecursion ra(a.d, a.ring, 2);
  CHECK(ra.symbolic(1, {1, 1}).is_zero());
  CHECK(ra.symbolic(2, {1, 2, 2}).is_zero());
}

TEST_CASE("recursion matches central differences at orders 2 and 3") {
  const double h = 1e-5;
  for (const char* name : {"exp", "weierstrass", "singular2-case4"}) {
    CAPTURE(name);
    auto f = family(name);
    const auto& B = *f.backend;
    const int n = B.n();
    DerivativeRecursion rec(f.d, f.ring, n);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1.2, 1.2);
    int points = 0;
    while (points < 20) {
      VecC u(n);
      for (int i = 0; i < n; ++i) u(i) = cplx(unif(rng), unif(rng));
      if (B.pole_distance(u) < 0.2) continue;
      try {
        for (int k = 1; k <= n; ++k)
          for (int p = 1; p <= n; ++p)
            for (int q = 1; q <= n; ++q) {
              MatC fd2 = (B.jacobian(u + unit(n, q - 1, h)) - B.jacobian(u - unit(n, q - 1, h))) / (2 * h);
              cplx rec2 = higher_derivative(rec, B, k, {p, q}, u);
              CHECK(std::abs(rec2 - fd2(k - 1, p - 1)) <= 1e-6 * std::max(1.0, std::abs(rec2)));
              for (int r = 1; r <= n; ++r) {
                auto Hp = B.hessian(u + unit(n, r - 1, h)), Hm = B.hessian(u - unit(n, r - 1, h));
                cplx fd3 = (Hp[k - 1](p - 1, q - 1) - Hm[k - 1](p - 1, q - 1)) / (2 * h);
                cplx rec3 = higher_derivative(rec, B, k, {p, q, r}, u);
                CHECK(std::abs(rec3 - fd3) <= 1e-6 * std::max(1.0, std::abs(rec3)));
              }
            }
        ++points;
      } catch (const DomainError&) {
        // singular recursion point; draw again
      }
    }
  }
}

TEST_CASE("recursion reports singular points") {
  auto w = family("weierstrass");
  DerivativeRecursion rec(w.d, w.ring, 1);
  const Lattice* lat = w.backend->lattice();
  VecC u(1);
  u(0) = lat->omega1;
  CHECK_THROWS_AS(higher_derivative(rec, *w.backend, 1, {1, 1}, u), DomainError);
}

TEST_CASE("taylor match at period pairs") {
  auto w = family("weierstrass");
  DerivativeRecursion rec(w.d, w.ring, 1);
  const Lattice* lat = w.backend->lattice();
  VecC a(1), b(1), c(1);
  a(0) = cplx(0.4, 0.25);
  b(0) = a(0) + 2.0 * lat->omega1;
  c(0) = -a(0);
  CHECK(taylor_match_check(rec, *w.backend, a, b, 3, 1e-8) == TaylorMatch::Match);
  CHECK(taylor_match_check(rec, *w.backend, a, c, 3, 1e-8) == TaylorMatch::NotApplicable);

  auto e = family("exp");
  DerivativeRecursion re(e.d, e.ring, 1);
  VecC x(1), y(1);
  x(0) = cplx(0.1, 0.2);
  y(0) = x(0) + cplx(0, 2 * M_PI);
  CHECK(taylor_match_check(re, *e.backend, x, y, 3, 1e-8) == TaylorMatch::Match);
}

TEST_CASE("newton preimage") {
  auto w = family("weierstrass");
  VecC a(1);
  a(0) = cplx(0.5, 0.3);
  VecC target = w.backend->value(a);
  auto b = newton_preimage(*w.backend, target, a + VecC::Constant(1, cplx(0.1, -0.1)));
  REQUIRE(b);
  CHECK(std::abs(w.backend->value(*b)(0) - target(0)) < 1e-12);
}

TEST_CASE("period detection") {
  PeriodOptions opts;
  SUBCASE("lemniscatic wp recovers its lattice") {
    auto w = family("weierstrass");
    auto r = detect_period(w.backend, opts);
    REQUIRE(r.basis.size() == 2);
    const Lattice* lat = w.backend->lattice();
    std::vector<VecC> ref(2, VecC(1)), got;
    ref[0](0) = 2.0 * lat->omega1;
    ref[1](0) = 2.0 * lat->omega2;
    for (auto& c : r.basis) {
      CHECK(c.pass);
      CHECK(c.residual < 1e-9);
      got.push_back(c.p);
    }
    CHECK(unimodular_relation(got, ref).has_value());
    // closure: negatives and sums are periods of the same lattice
    VecC s = got[0] + got[1];
    CHECK(in_lattice(got, -got[0]));
    CHECK(in_lattice(got, s));
    CHECK(period_residual(*w.backend, s, 20, 9, 1.2) < 1e-9);
    CHECK_FALSE(in_lattice(got, 0.5 * got[0]));
  }
  SUBCASE("the rational family has no period") {
    auto r = detect_period(family("rational").backend, opts);
    CHECK(r.basis.empty());
    CHECK(r.extra.empty());
  }
  SUBCASE("exp has period 2 pi i") {
    auto r = detect_period(family("exp").backend, opts);
    REQUIRE(r.basis.size() == 1);
    CHECK(std::abs(r.basis[0].p(0) - cplx(0, 2 * M_PI)) < 1e-9);
  }
  SUBCASE("singular case 4 recovers (2 omega_i, 2 eta_i)") {
    auto f = family("singular2-case4");
    const Lattice* lat = f.backend->lattice();
    REQUIRE(zeta_shift_check(*lat, 1, 50, 5).pass);
    REQUIRE(zeta_shift_check(*lat, 2, 50, 5).pass);
    auto r = detect_period(f.backend, opts);
    REQUIRE(r.basis.size() == 2);
    std::vector<VecC> ref(2, VecC(2)), got;
    ref[0] << 2.0 * lat->omega1, 2.0 * lat->eta1;
    ref[1] << 2.0 * lat->omega2, 2.0 * lat->eta2;
    for (auto& c : r.basis) got.push_back(c.p);
    CHECK(unimodular_relation(got, ref).has_value());
  }
}

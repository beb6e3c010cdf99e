#include <doctest.h>

#include "aat/elimination.hpp"
#include "aat/errors.hpp"
#include "aat/poly_algo.hpp"
#include "support.hpp"

using namespace aat;
using testsupport::P;

namespace {

bool associate(const MPoly& a, const MPoly& b) {
  return primitive_integer(a) == primitive_integer(b);
}

ProblemSpec exp_rate(int c) {
  return parse_problem("[mapping]\nn = 1\nfamily = exp\nparam c = " + std::to_string(c) +
                       "\n[aat]\nG1 = L1 - x1*y1\n");
}

struct Fixture {
  ProblemSpec spec;
  AATSystem sys;
  BackendPtr backend;
  EliminationOptions opts;
  explicit Fixture(ProblemSpec s)
      : spec(std::move(s)),
        sys(make_system(spec)),
        backend(make_backend(spec.family, spec.params, spec.phi)),
        opts(elimination_options(spec.options)) {}
};

}  // namespace

TEST_CASE("cross differences of simple laws") {
  Fixture f(builtin_problem("exp"));
  CHECK(cross_difference(f.sys, 1, 1) == P(f.sys.ring, "x1*w1_1 - y1*z1_1"));
  Fixture a(builtin_problem("singular2-case1"));
  CHECK(cross_difference(a.sys, 1, 1) == P(a.sys.ring, "w1_1 - z1_1"));
  CHECK(cross_difference(a.sys, 2, 1) == P(a.sys.ring, "w2_1 - z2_1"));

  AATSystem constant{1, f.sys.ring, {P(f.sys.ring, "L1 - 7")}};
  CHECK_THROWS_AS(cross_difference(constant, 1, 1), StructuralError);
}

TEST_CASE("gcd and eliminant") {
  Fixture f(builtin_problem("exp"));
  const auto& R = f.sys.ring;
  SUBCASE("L-free cross difference passes through") {
    auto [g, H] = gcd_and_eliminant(f.sys.polys[0], cross_difference(f.sys, 1, 1), 1);
    CHECK(g.is_one());
    CHECK(associate(H, P(R, "x1*w1_1 - y1*z1_1")));
  }
  SUBCASE("shared factor is stripped before the resultant") {
    AATSystem composite{1, R, {P(R, "(L1 - x1*y1)*(L1 - 1)")}};
    MPoly d = cross_difference(composite, 1, 1);
    auto [g, H] = gcd_and_eliminant(composite.polys[0], d, 1);
    CHECK(g == P(R, "L1 - 1"));
    CHECK(associate(H, P(R, "x1*w1_1 - y1*z1_1")));
  }
  SUBCASE("resultant branch agrees with the Sylvester determinant") {
    Fixture w(builtin_problem("weierstrass"));
    MPoly G = w.sys.polys[0];
    MPoly d = cross_difference(w.sys, 1, 1);
    auto [g, H] = gcd_and_eliminant(G, d, 1);
    CHECK(g.is_one());
    CHECK_FALSE(H.contains(w.sys.ring->index("L1")));
    MPoly oracle = testsupport::sylvester_resultant(G, d, w.sys.ring->index("L1"));
    CHECK(associate(H, oracle));
  }
}

TEST_CASE("eliminants are symmetric and vanish on the backend") {
  for (const char* fam : {"exp", "weierstrass", "singular2-case2"}) {
    CAPTURE(fam);
    Fixture f(builtin_problem(fam));
    for (int k = 1; k <= f.sys.n; ++k)
      for (int p = 1; p <= f.sys.n; ++p) {
        auto [g, H] = gcd_and_eliminant(f.sys.polys[k - 1], cross_difference(f.sys, k, p), k);
        MPoly s = swap_sides(H, f.sys.n);
        CHECK(((s - H).is_zero() || (s + H).is_zero()));
        auto rep = residual_check("H", H, f.backend, f.opts.sampling);
        CHECK(rep.pass);
      }
  }
}

TEST_CASE("specialization of v") {
  SUBCASE("exp at v = 0") {
    Fixture f(builtin_problem("exp"));
    auto [g, H] = gcd_and_eliminant(f.sys.polys[0], cross_difference(f.sys, 1, 1), 1);
    SpecializationRecord rec;
    CHECK(associate(specialize_v(H, *f.backend, f.opts, rec), P(f.sys.ring, "z1_1 - x1")));
    CHECK(rec.mode == "exact-point");
    CHECK(rec.retries == 0);
  }
  SUBCASE("additive at v = 0") {
    Fixture f(builtin_problem("singular2-case1"));
    auto [g, H] = gcd_and_eliminant(f.sys.polys[0], cross_difference(f.sys, 1, 1), 1);
    SpecializationRecord rec;
    CHECK(associate(specialize_v(H, *f.backend, f.opts, rec), P(f.sys.ring, "z1_1 - 1")));
  }
  SUBCASE("lemniscatic half-periods degenerate and the pole germ succeeds") {
    Fixture f(builtin_problem("weierstrass"));
    auto [g, H] = gcd_and_eliminant(f.sys.polys[0], cross_difference(f.sys, 1, 1), 1);
    SpecializationRecord rec;
    MPoly h = specialize_v(H, *f.backend, f.opts, rec);
    CHECK(rec.retries == 3);
    CHECK(rec.mode == "pole-germ");
    CHECK(h == P(f.sys.ring, "z1_1^2 - 4*x1^3 + 4*x1"));
  }
  SUBCASE("numeric reconstruction recovers a rational relation") {
    Fixture f(exp_rate(2));
    f.opts.mode = SpecializationMode::NumericReconstruct;
    auto [g, H] = gcd_and_eliminant(f.sys.polys[0], cross_difference(f.sys, 1, 1), 1);
    SpecializationRecord rec;
    CHECK(associate(specialize_v(H, *f.backend, f.opts, rec), P(f.sys.ring, "z1_1 - 2*x1")));
    CHECK(rec.mode == "numeric-reconstruct");
  }
  SUBCASE("numeric reconstruction gives up when coefficients depend on v") {
    Fixture f(builtin_problem("weierstrass"));
    f.opts.mode = SpecializationMode::NumericReconstruct;
    f.opts.retries = 2;
    auto [g, H] = gcd_and_eliminant(f.sys.polys[0], cross_difference(f.sys, 1, 1), 1);
    SpecializationRecord rec;
    CHECK_THROWS_AS(specialize_v(H, *f.backend, f.opts, rec), StageError);
    CHECK(rec.attempts.size() == 3);
  }
}

TEST_CASE("first-order relations") {
  SUBCASE("exp") {
    Fixture f(builtin_problem("exp"));
    auto d = derive_first_order(f.sys, f.backend, f.opts);
    REQUIRE(d.complete(1));
    CHECK(d.relations[0].P.to_string() == "z1_1 - x1");
    CHECK(d.relations[0].verified);
  }
  SUBCASE("exp with rate 2: the backend picks the matching relation") {
    Fixture f(exp_rate(2));
    auto d = derive_first_order(f.sys, f.backend, f.opts);
    REQUIRE(d.complete(1));
    CHECK(d.relations[0].P.to_string() == "z1_1 - 2*x1");
  }
  SUBCASE("lemniscatic wp") {
    Fixture f(builtin_problem("weierstrass"));
    auto d = derive_first_order(f.sys, f.backend, f.opts);
    REQUIRE(d.complete(1));
    const auto& r = d.relations[0];
    CHECK(r.P.to_string() == "z1_1^2 - 4*x1^3 + 4*x1");
    CHECK(r.verified);
    CHECK(r.P.degree("z1_1") >= 1);
    CHECK(r.P.degree("z1_1") <= r.degree_bound);
  }
  SUBCASE("separable product") {
    Fixture f(builtin_problem("singular2-case3"));
    auto d = derive_first_order(f.sys, f.backend, f.opts);
    REQUIRE(d.complete(2));
    CHECK(d.find(1, 1)->P.to_string() == "z1_1 - x1");
    CHECK(d.find(1, 2)->P.to_string() == "z1_2");
    CHECK(d.find(2, 1)->P.to_string() == "z2_1");
    CHECK(d.find(2, 2)->P.to_string() == "z2_2 - x2");
    ResidualReport rep;
    MPoly rel = verify_general_dependence(f.sys, d, {"x1", "z1_1", "z2_2"}, f.backend, f.opts.sampling, rep);
    CHECK(rel.to_string() == "z1_1 - x1");
    CHECK(rep.pass);
  }
  SUBCASE("n = 1 dependence is P_11 itself") {
    Fixture f(builtin_problem("weierstrass"));
    auto d = derive_first_order(f.sys, f.backend, f.opts);
    ResidualReport rep;
    MPoly rel = verify_general_dependence(f.sys, d, {"z1_1", "x1"}, f.backend, f.opts.sampling, rep);
    CHECK(rel == d.relations[0].P);
  }
}

TEST_CASE("derivation is deterministic") {
  Fixture f(builtin_problem("weierstrass"));
  auto a = derive_first_order(f.sys, f.backend, f.opts);
  auto b = derive_first_order(f.sys, f.backend, f.opts);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].eliminant == b.trace[i].eliminant);
    CHECK(a.trace[i].record.attempts == b.trace[i].record.attempts);
  }
  CHECK(a.relations[0].residual.max == b.relations[0].residual.max);
}

TEST_CASE("content over a set of symbols") {
  auto R = make_standard_ring(2, {});
  MPoly p = P(R, "(x1^2 - 1)*(z1_1*x2 + z2_1)*(z1_1 - x1)");
  std::vector<std::size_t> zs = {R->index("z1_1"), R->index("z2_1")};
  CHECK(associate(content_in_set(p, zs), P(R, "x1^2 - 1")));
}

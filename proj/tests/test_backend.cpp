#include <doctest.h>

#include <cmath>
#include <random>

#include "aat/backend.hpp"
#include "aat/errors.hpp"
#include "aat/generators.hpp"
#include "aat/poly_algo.hpp"
#include "aat/problem.hpp"
#include "aat/residual.hpp"
#include "support.hpp"

using namespace aat;
using testsupport::P;

namespace {

std::map<std::string, Rat> lemniscatic() { return {{"g2", Rat(4)}, {"g3", Rat(0)}}; }

BackendPtr backend_for(const std::string& family) {
  if (family == "exp") return make_backend(family, {{"c", Rat(1)}});
  if (family == "rational") return make_backend(family, {});
  if (family == "singular2-case1" || family == "singular2-case2" || family == "singular2-case3")
    return make_backend(family, {});
  auto p = lemniscatic();
  if (family == "singular2-case4") p["eps"] = Rat(1);
  return make_backend(family, p);
}

}  // namespace

TEST_CASE("backend jacobians and hessians agree with central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-0.9, 0.9);
  for (const auto& fam : family_names()) {
    CAPTURE(fam);
    auto b = backend_for(fam);
    const double h = 1e-5;
    int checked = 0;
    while (checked < 5) {
      VecC u(b->n());
      for (int i = 0; i < b->n(); ++i) u(i) = cplx(d(rng), d(rng));
      if (b->pole_distance(u) < 0.2) continue;
      MatC J = b->jacobian(u);
      auto H = b->hessian(u);
      for (int p = 0; p < b->n(); ++p) {
        VecC e = VecC::Zero(b->n());
        e(p) = h;
        VecC fd = (b->value(u + e) - b->value(u - e)) / (2 * h);
        MatC Jfd = (b->jacobian(u + e) - b->jacobian(u - e)) / (2 * h);
        for (int k = 0; k < b->n(); ++k) {
          double scale = std::max(1.0, std::abs(J(k, p)));
          CHECK(std::abs(fd(k) - J(k, p)) / scale < 1e-6);
          for (int q = 0; q < b->n(); ++q) {
            double s2 = std::max(1.0, std::abs(H[k](q, p)));
            CHECK(std::abs(Jfd(k, q) - H[k](q, p)) / s2 < 1e-5);
          }
        }
      }
      ++checked;
    }
  }
}

TEST_CASE("exponential and coordinatewise generators") {
  auto R = make_standard_ring(1, {});
  CHECK(generate_aat("exp", R, {})[0].to_string() == "L1 - x1*y1");
  auto R2 = make_standard_ring(2, {});
  auto g = generate_aat("singular2-case2", R2, {});
  CHECK(g[0].to_string() == "L1 - x1 - y1");
  CHECK(g[1].to_string() == "L2 - x2*y2");
  CHECK_THROWS_AS(generate_aat("singular2-case5", R2, lemniscatic()), StructuralError);
}

TEST_CASE("rational generator for phi = u^2") {
  auto R = make_standard_ring(1, {});
  auto phi = P(rational_family_ring(), "u^2");
  MPoly g = generate_aat("rational", R, {}, phi)[0];
  // (s+t)^2 = L, s^2 = x, t^2 = y  gives (L - x - y)^2 = 4xy.
  MPoly expect = primitive_integer(P(R, "(L1 - x1 - y1)^2 - 4*x1*y1"));
  CHECK(((g - expect).is_zero() || (g + expect).is_zero()));
}

TEST_CASE("generated laws vanish on the numeric families") {
  SamplingOptions opts;
  opts.samples = 60;
  for (const auto& fam : family_names()) {
    if (!has_generator(fam)) continue;
    CAPTURE(fam);
    auto spec = builtin_problem(fam);
    auto b = make_backend(fam, spec.params, spec.phi);
    for (int k = 0; k < spec.n; ++k) {
      auto rep = residual_check("G", spec.aat[k], b, opts, nullptr);
      CAPTURE(k);
      CAPTURE(rep.p95);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("weierstrass law has degree 2 in L1 and keeps g2, g3 symbolic when declared") {
  auto R = make_standard_ring(1, {"g2", "g3"});
  MPoly g = generate_aat("weierstrass", R, lemniscatic())[0];
  CHECK(g.degree("L1") == 2);
  CHECK(g.contains(R->index("g2")));
  CHECK(g.contains(R->index("g3")));
  CHECK(g.degree("x1") == 2);
}

TEST_CASE("a wrong law fails the residual check") {
  auto spec = builtin_problem("exp");
  auto b = make_backend("exp", {{"c", Rat(1)}});
  SamplingOptions opts;
  opts.samples = 20;
  auto rep = residual_check("bad", P(spec.ring, "L1 - x1 - y1"), b, opts, nullptr);
  CHECK_FALSE(rep.pass);
  CHECK(rep.samples == 20);
}

TEST_CASE("residual sampling is reproducible from the seed") {
  auto spec = builtin_problem("weierstrass");
  auto b = make_backend("weierstrass", spec.params);
  SamplingOptions opts;
  opts.samples = 30;
  auto a = residual_check("G", spec.aat[0], b, opts, nullptr);
  auto c = residual_check("G", spec.aat[0], b, opts, nullptr);
  CHECK(a.max == c.max);
  CHECK(a.skipped == c.skipped);
}

TEST_CASE("problem file parsing") {
  const std::string good =
      "# comment\n"
      "[mapping]\n"
      "n = 1\n"
      "family = weierstrass\n"
      "param g2 = 4\n"
      "param g3 = 0\n"
      "[aat]\n"
      "G1 = auto\n"
      "[options]\n"
      "tol = 1e-8\n"
      "samples = 50\n"
      "mode = numeric-reconstruct\n";
  auto spec = parse_problem(good);
  CHECK(spec.n == 1);
  CHECK(spec.options.samples == 50);
  CHECK(spec.options.tol == doctest::Approx(1e-8));
  CHECK(spec.options.mode == SpecializationMode::NumericReconstruct);
  CHECK(spec.generated[0]);
  CHECK(spec.ring->find("g2").has_value());

  SUBCASE("wrong number of polynomials") {
    try {
      parse_problem("[mapping]\nn = 2\n[aat]\nG1 = L1 - x1 - y1\n");
      FAIL("expected an error");
    } catch (const StructuralError& e) {
      CHECK(std::string(e.what()).find("expected 2 AAT polynomials") != std::string::npos);
    }
  }
  SUBCASE("no dependence on L") {
    CHECK_THROWS_AS(parse_problem("[mapping]\nn = 1\n[aat]\nG1 = x1 - y1\n"), StructuralError);
  }
  SUBCASE("symbol outside the alphabet") {
    CHECK_THROWS_AS(parse_problem("[mapping]\nn = 1\n[aat]\nG1 = L1 - z1_1\n"), StructuralError);
  }
  SUBCASE("parse error carries its position") {
    try {
      parse_problem("[mapping]\nn = 1\n[aat]\nG1 = L1 - x1^-2\n");
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
      CHECK(e.column() > 5);
    }
  }
  SUBCASE("unknown section") {
    CHECK_THROWS_AS(parse_problem("[stuff]\n"), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_problem("/nonexistent/problem.aat"), std::ios_base::failure);
  }
}

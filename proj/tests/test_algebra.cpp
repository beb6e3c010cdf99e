#include <doctest.h>

#include <complex>

#include "aat/errors.hpp"
#include "aat/poly_algo.hpp"
#include "aat/ratfn.hpp"
#include "support.hpp"

using namespace aat;
using testsupport::P;

namespace {

RingPtr small_ring() { return make_ring({"theta", "x", "y", "x1", "y1", "z1_1", "w1_1", "L1"}, {"g2", "g3"}); }

}  // namespace

TEST_CASE("rationals stay reduced") {
  Rat r = make_rat(6, -4);
  CHECK(to_string(r) == "-3/2");
  CHECK(to_string(make_rat(0, 7)) == "0");
  CHECK_THROWS_AS(make_rat(1, 0), DomainError);
  CHECK(*exact_sqrt(make_rat(9, 4)) == make_rat(3, 2));
  CHECK_FALSE(exact_sqrt(Rat(2)).has_value());
}

TEST_CASE("polynomial arithmetic") {
  auto R = small_ring();
  CHECK((P(R, "x1 + 1") * P(R, "x1 - 1")).to_string() == "x1^2 - 1");
  MPoly p = P(R, "3*x1*y1 - 7/2*g2");
  CHECK(p + MPoly(R) == p);
  CHECK(pow(P(R, "x1 + y1"), 2).to_string() == "x1^2 + 2*x1*y1 + y1^2");
  CHECK_THROWS_AS(pow(p, -1), DomainError);
  CHECK(P(R, "theta^2 - 4*x1^3 + g2*x1 + g3").to_string() == "theta^2 - 4*x1^3 + g2*x1 + g3");
  CHECK(P(R, "-x1 + 2").to_string() == "-x1 + 2");
  CHECK(P(R, "0*x1").to_string() == "0");
}

TEST_CASE("ring mismatch is a structural error") {
  auto A = make_ring({"x1"});
  auto B = make_ring({"y1"});
  CHECK_THROWS_AS(MPoly::symbol(A, "x1") + MPoly::symbol(B, "y1"), StructuralError);
  CHECK_THROWS_AS(make_ring({"x", "x"}), StructuralError);
}

TEST_CASE("differentiation") {
  auto R = small_ring();
  CHECK(derivative(P(R, "x1^3"), "x1").to_string() == "3*x1^2");
  CHECK(derivative(P(R, "y1^2"), "x1").is_zero());
  CHECK(derivative(P(R, "theta^2 - 4*x1^3 + g2*x1 + g3"), "theta").to_string() == "2*theta");
  CHECK_THROWS_AS(derivative(P(R, "x1"), "q"), StructuralError);
}

TEST_CASE("gcd examples") {
  auto R = small_ring();
  CHECK(gcd(P(R, "x1^2 - 1"), P(R, "x1^2 - 2*x1 + 1")).to_string() == "x1 - 1");
  CHECK(gcd(P(R, "2*x1 + 4*y1"), MPoly(R)).to_string() == "x1 + 2*y1");
  CHECK(gcd(P(R, "x1*y1"), P(R, "x1*y1 + x1")).to_string() == "x1");
  CHECK(gcd(P(R, "(x1 - y1)*(x1*y1 + g2)"), P(R, "(x1 - y1)^2*(x1 + g3)")).to_string() == "x1 - y1");
  CHECK(gcd(P(R, "x1^2 - y1^2"), P(R, "x1^3 - y1^3")).to_string() == "x1 - y1");
}

TEST_CASE("resultant examples") {
  auto R = make_ring({"x", "y1"});
  CHECK(resultant(P(R, "x^2 - 1"), P(R, "x - 2"), "x").to_string() == "3");
  CHECK(resultant(P(R, "x - y1"), P(R, "x - y1"), "x").is_zero());
  CHECK_THROWS_AS(resultant(P(R, "y1"), P(R, "x - 2"), "x"), DomainError);
}

TEST_CASE("squarefree checks") {
  auto R = small_ring();
  CHECK(squarefree_check(P(R, "theta^2 - x1"), "theta"));
  CHECK_FALSE(squarefree_check(P(R, "(theta - x1)^2"), "theta"));
  CHECK(squarefree_check(P(R, "theta^2 - 4*x1^3 + g2*x1 + g3"), "theta"));
  CHECK_THROWS_AS(squarefree_check(P(R, "x1"), "theta"), DomainError);
  auto dec = squarefree_decomposition(P(R, "(theta - x1)^2*(theta + 1)*x1"), R->index("theta"));
  REQUIRE(dec.size() == 2);
  CHECK(dec[0].to_string() == "theta + 1");
  CHECK(dec[1].to_string() == "theta - x1");
}

TEST_CASE("exact square roots") {
  auto R = small_ring();
  auto s = poly_sqrt(P(R, "(3*x1*y1 - 2*g2 + y1^2)^2"));
  REQUIRE(s.has_value());
  CHECK(*s == P(R, "3*x1*y1 - 2*g2 + y1^2"));
  CHECK_FALSE(poly_sqrt(P(R, "x1^2 + 1")).has_value());
}

TEST_CASE("candidate factors split off rational roots and content") {
  auto R = small_ring();
  auto f = candidate_factors(P(R, "x1*(theta - 2)*(theta^2 - x1)"), R->index("theta"));
  REQUIRE(f.size() == 2);
  CHECK(f[0].to_string() == "theta - 2");
  CHECK(f[1].to_string() == "theta^2 - x1");
}

TEST_CASE("rational functions") {
  auto R = small_ring();
  RatFn f(P(R, "x1^2 - 1"), P(R, "2*x1 + 2"));
  CHECK(f.to_string() == "1/2*x1 - 1/2");
  RatFn g(P(R, "x1 - 1"), P(R, "x1 + 1"));
  std::vector<std::complex<double>> vals(R->size(), 0.0);
  vals[R->index("x1")] = -1.0;
  CHECK_THROWS_AS(evaluate(g, vals), PoleError);
  CHECK((g * g.inverse()).to_string() == "1");
  RatFn xy(P(R, "x1*y1"));
  RatFn one = RatFn::constant(R, Rat(1));
  CHECK(compose(xy, R->index("y1"), one).to_string() == "x1");
}

TEST_CASE("numeric substitution on the lemniscatic cubic") {
  auto R = small_ring();
  MPoly v = P(R, "theta^2 - 4*x1^3 + g2*x1 + g3");
  std::vector<std::complex<double>> vals(R->size(), 0.0);
  vals[R->index("x1")] = 1.0;
  vals[R->index("g2")] = 4.0;
  CHECK(std::abs(evaluate(v, vals).value) == 0.0);
}

TEST_CASE("parser errors carry positions") {
  auto R = small_ring();
  try {
    P(R, "x1^-1");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(P(R, "x1^1/2"), ParseError);
  CHECK_THROWS_AS(P(R, "q + 1"), ParseError);
  CHECK_THROWS_AS(P(R, "x1 x1"), ParseError);
  CHECK_THROWS_AS(P(R, "(x1"), ParseError);
  CHECK(P(R, "7/2").to_string() == "7/2");
}

// ---- properties ----

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(11);
  auto R = make_ring({"a", "b", "c"}, {"g2"});
  std::vector<std::size_t> syms{0, 1, 2, 3};
  for (int it = 0; it < 60; ++it) {
    auto p = testsupport::random_poly(rng, R, syms, 3, 4);
    auto q = testsupport::random_poly(rng, R, syms, 3, 4);
    auto r = testsupport::random_poly(rng, R, syms, 3, 4);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(p + q == q + p);
    CHECK(p * q == q * p);
    CHECK((p - p).is_zero());
  }
}

TEST_CASE("gcd scales with a common factor") {
  std::mt19937_64 rng(12);
  auto R = make_ring({"a", "b", "c"});
  std::vector<std::size_t> syms{0, 1, 2};
  for (int it = 0; it < 40; ++it) {
    auto a = testsupport::random_poly(rng, R, syms, 3, 3);
    auto b = testsupport::random_poly(rng, R, syms, 3, 3);
    auto c = testsupport::random_poly(rng, R, syms, 3, 3);
    if (c.is_constant()) continue;
    MPoly lhs = gcd(a * c, b * c);
    MPoly rhs = monic(c * gcd(a, b));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("resultant matches the Sylvester determinant and detects common factors") {
  std::mt19937_64 rng(13);
  auto R = make_ring({"v", "a", "b"}, {"g2"});
  std::vector<std::size_t> syms{0, 1, 2, 3};
  int checked = 0;
  for (int it = 0; it < 80; ++it) {
    auto a = testsupport::random_poly(rng, R, syms, 4, 4);
    auto b = testsupport::random_poly(rng, R, syms, 3, 4);
    if (it % 3 == 0) {
      auto c = testsupport::random_poly(rng, R, syms, 2, 2);
      a *= c;
      b *= c;
    }
    if (!a.contains(0) || !b.contains(0) || a.degree(0) > 4 || b.degree(0) > 4) continue;
    MPoly res = resultant(a, b, 0);
    CHECK(res == testsupport::sylvester_resultant(a, b, 0));
    CHECK(res.is_zero() == (gcd(a, b).degree(0) > 0));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("derivative is linear and obeys the product rule") {
  std::mt19937_64 rng(14);
  auto R = make_ring({"a", "b"}, {"g3"});
  std::vector<std::size_t> syms{0, 1, 2};
  for (int it = 0; it < 40; ++it) {
    auto p = testsupport::random_poly(rng, R, syms, 4, 4);
    auto q = testsupport::random_poly(rng, R, syms, 4, 4);
    CHECK(derivative(p + q.scaled(Rat(3)), 0) == derivative(p, 0) + derivative(q, 0).scaled(Rat(3)));
    CHECK(derivative(p * q, 0) == derivative(p, 0) * q + p * derivative(q, 0));
  }
}

TEST_CASE("numeric substitution agrees with exact substitution") {
  std::mt19937_64 rng(15);
  auto R = make_ring({"a", "b"}, {"g2"});
  std::vector<std::size_t> syms{0, 1, 2};
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int it = 0; it < 40; ++it) {
    auto p = testsupport::random_poly(rng, R, syms, 4, 5);
    auto q = testsupport::random_poly(rng, R, syms, 2, 3);
    RatFn f(p, q.is_zero() ? MPoly::constant(R, Rat(1)) : q);
    Rat bval = make_rat(long(it % 7) - 3, 5);
    std::vector<std::complex<double>> vals{{U(rng), U(rng)}, {bval.get_d(), 0.0}, {U(rng), U(rng)}};
    try {
      RatFn exact = compose(f, 1, RatFn::constant(R, bval));
      auto direct = evaluate(f, vals);
      auto via = evaluate(exact, vals);
      CHECK(std::abs(direct - via) <= 1e-12 * std::max(1.0, std::abs(direct)));
    } catch (const PoleError&) {
    } catch (const DomainError&) {
      // denominator vanishes identically at b = bval
    }
  }
}

TEST_CASE("parse and print round trip") {
  std::mt19937_64 rng(16);
  auto R = make_ring({"a", "b", "c", "d"}, {"g2", "g3"});
  std::vector<std::size_t> syms{0, 1, 2, 3, 4, 5};
  for (int it = 0; it < 100; ++it) {
    auto p = testsupport::random_poly(rng, R, syms, 6, 6);
    p = p.scaled(make_rat(long(it % 5) + 1, long(it % 3) + 2));
    CHECK(P(R, p.to_string()) == p);
  }
}

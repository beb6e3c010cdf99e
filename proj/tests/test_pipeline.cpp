#include <doctest.h>

#include <set>

#include "aat/elimination.hpp"
#include "aat/errors.hpp"
#include "aat/pipeline.hpp"
#include "aat/resolver.hpp"
#include "support.hpp"

using namespace aat;

namespace {

// Every string under these keys is a polynomial in the problem ring.
void collect_polys(const Json& j, const std::string& key, std::vector<std::string>& out) {
  static const std::set<std::string> poly_keys = {"P",  "V",   "delta", "gcd", "eliminant", "specialized",
                                                  "num", "den", "D",     "E",   "G"};
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "verdicts" && k != "residuals") collect_polys(v, k, out);
  } else if (j.is_array()) {
    for (const auto& v : j) collect_polys(v, key, out);
  } else if (j.is_string() && (poly_keys.count(key) || key.rfind("P_", 0) == 0)) {
    out.push_back(j.get<std::string>());
  }
}

}  // namespace

TEST_CASE("exp report carries the first-order relation") {
  auto spec = builtin_problem("exp");
  auto r = run_problem(spec, Stage::All);
  CHECK(r.pass);
  CHECK(r.report["formulas"]["P_11"] == "z1_1 - x1");
  CHECK(r.report["verdicts"]["P_11"] == "pass");
  CHECK(r.report["seed"] == 42);
  for (const char* section : {"spec-echo", "trace", "variety", "formulas", "residuals", "periods", "verdicts", "seed"})
    CHECK(r.report.contains(section));
  CHECK_FALSE(r.report.contains("timings"));
  CHECK(run_problem(spec, Stage::Derive, {true}).report.contains("timings"));
}

TEST_CASE("verdict is a threshold comparison") {
  auto backend = make_backend("exp", {});
  SamplingOptions opts;
  opts.tol = 1e-9;
  auto rep = residual_check(
      "fixed", [](const Draw&) { return std::optional<std::pair<cplx, double>>({cplx(3e-12, 0), 1.0}); }, backend, opts);
  CHECK(rep.max == doctest::Approx(3e-12));
  CHECK(to_json(rep)["verdict"] == "pass");
  opts.tol = 1e-12;
  rep = residual_check(
      "fixed", [](const Draw&) { return std::optional<std::pair<cplx, double>>({cplx(3e-12, 0), 1.0}); }, backend, opts);
  CHECK(to_json(rep)["verdict"] == "fail");
}

TEST_CASE("reports are byte-identical for a fixed seed") {
  for (const char* family : {"exp", "weierstrass", "singular2-case3"}) {
    CAPTURE(family);
    auto spec = builtin_problem(family);
    CHECK(serialize_report(run_problem(spec, Stage::All).report) ==
          serialize_report(run_problem(spec, Stage::All).report));
  }
  auto spec = builtin_problem("weierstrass");
  auto a = serialize_report(run_problem(spec, Stage::Period).report);
  spec.options.seed = 7;
  CHECK(a != serialize_report(run_problem(spec, Stage::Period).report));
}

TEST_CASE("emitted polynomials re-parse to equal polynomials") {
  for (const char* family : {"exp", "weierstrass", "rational", "singular2-case2"}) {
    CAPTURE(family);
    auto spec = builtin_problem(family);
    auto r = run_problem(spec, Stage::All);
    REQUIRE(r.pass);
    std::vector<std::string> polys;
    collect_polys(r.report, "", polys);
    CHECK(polys.size() > 5);
    for (const auto& text : polys) {
      CAPTURE(text);
      CHECK(parse_poly(text, spec.ring).to_string() == text);
    }
  }
}

TEST_CASE("stage failures produce a failure section") {
  auto spec = builtin_problem("exp");
  spec.family = "none";
  auto r = run_problem(spec, Stage::All);
  CHECK_FALSE(r.pass);
  CHECK(r.report["failure"]["stage"] == "backend");
  CHECK(r.report["verdicts"]["stage backend"] == "fail");

  auto f = load_failure_report("x.aat", "file not found", 42);
  CHECK_FALSE(verdicts_pass(f["verdicts"]));
}

TEST_CASE("subcommands run only their stages") {
  auto spec = builtin_problem("weierstrass");
  auto d = run_problem(spec, Stage::Derive).report;
  CHECK(d["variety"].empty());
  CHECK(d["periods"].empty());
  auto v = run_problem(spec, Stage::Variety).report;
  CHECK(v["variety"]["V"] == "theta^2 - 4*x1^3 + 4*x1");
  CHECK(v["variety"]["painleve"][0] == "du = dx/theta");
  CHECK_FALSE(v["formulas"].contains("addition"));
  auto res = run_problem(spec, Stage::Resolve).report;
  CHECK(res["formulas"]["addition"]["status"] == "resolved");
  CHECK(res["formulas"]["negation"]["E"][0] == "x1 - y1");
  auto p = run_problem(spec, Stage::Period).report;
  CHECK(p["trace"].empty());
  CHECK(p["periods"]["basis"].size() == 2);
  CHECK(p["verdicts"]["period lattice"] == "pass");
}

TEST_CASE("a degree 4 law is reported unresolved") {
  auto spec = parse_problem("[mapping]\nn = 1\nfamily = rational\nphi = u^2 + u\n[aat]\nG1 = auto\n");
  auto r = run_problem(spec, Stage::Resolve);
  CHECK_FALSE(r.pass);
  CHECK(r.report["formulas"]["addition"]["status"].get<std::string>().rfind("unresolved", 0) == 0);
  CHECK_FALSE(r.report["formulas"]["addition"].contains("R1"));
  CHECK(r.report["verdicts"]["addition formula"] == "fail");
}

TEST_CASE("negation of the quasi-periodic pair falls back to interpolation") {
  auto spec = builtin_problem("singular2-case4");
  auto sys = make_system(spec);
  auto backend = make_backend(spec.family, spec.params);
  SamplingOptions opts;
  auto neg = derive_negation(sys, backend, opts);
  REQUIRE(neg.E.size() == 2);
  CHECK(neg.E[0] == testsupport::P(sys.ring, "x1 - y1"));
  CHECK(neg.E[1] == testsupport::P(sys.ring, "x2 + y2"));
  CHECK(neg.E_source[1] == "interpolation");
  CHECK(neg.residuals[1].pass);
}

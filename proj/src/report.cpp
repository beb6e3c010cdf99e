#include "aat/report.hpp"

#include <fstream>
#include <iostream>

namespace aat {

namespace {

// JSON has no infinity; unbounded statistics become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const ResidualReport& r) {
  Json j = {{"relation", r.relation}, {"samples", r.samples}, {"skipped", r.skipped}, {"max", number(r.max)},
            {"mean", number(r.mean)}, {"p95", number(r.p95)},   {"tol", r.tol},         {"verdict", verdict(r.pass)}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

Json to_json(const RatFn& f) { return {{"num", f.num().to_string()}, {"den", f.den().to_string()}}; }

Json to_json(const VecC& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back({number(v(i).real()), number(v(i).imag())});
  return a;
}

std::string serialize_report(const Json& report) { return report.dump(2) + "\n"; }

void emit_report(const Json& report, const std::string& path) {
  const std::string text = serialize_report(report);
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed for " + path);
}

bool verdicts_pass(const Json& verdicts) {
  for (const auto& [name, v] : verdicts.items())
    if (v != "pass") return false;
  return true;
}

}  // namespace aat

// aat: derive, verify and report algebraic addition theorems.
#include <CLI11.hpp>
#include <iostream>

#include "aat/errors.hpp"
#include "aat/pipeline.hpp"

namespace {

struct Overrides {
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
};

void apply(const Overrides& o, aat::ProblemOptions& opts) {
  if (o.tol) opts.tol = *o.tol;
  if (o.samples) opts.samples = *o.samples;
  if (o.seed) opts.seed = *o.seed;
  if (o.mode) opts.mode = aat::parse_mode(*o.mode);
}

void summarize(const aat::Json& report) {
  int total = 0, failed = 0;
  for (const auto& [name, v] : report["verdicts"].items()) {
    ++total;
    if (v != "pass") {
      ++failed;
      std::cerr << "FAIL " << name << "\n";
    }
  }
  if (report.contains("failure"))
    std::cerr << "stage " << report["failure"]["stage"].get<std::string>() << " failed: "
              << report["failure"]["message"].get<std::string>() << "\n";
  std::cerr << total - failed << "/" << total << " verdicts pass\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic addition theorems: derivation and numeric verification"};
  app.require_subcommand(1);

  std::string problem, output = "-";
  Overrides ov;
  bool timings = false;

  auto add_common = [&](CLI::App* sub, bool needs_problem) {
    if (needs_problem) sub->add_option("problem", problem, "Problem file (.aat)")->required();
    sub->add_option("-o,--output", output, "Report path; '-' writes to stdout");
    sub->add_option("--tol", ov.tol, "Residual tolerance");
    sub->add_option("--samples", ov.samples, "Residual sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", ov.seed, "Random seed");
    sub->add_option("--mode", ov.mode, "Specialization mode")
        ->check(CLI::IsMember({"exact-point", "numeric-reconstruct"}));
    sub->add_flag("--timings", timings, "Record wall-clock seconds per stage (reports stop being reproducible)");
  };
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"derive", "First-order relations P_kp with the elimination trace"},
      {"variety", "Primitive element, addition-theorem variety and Painleve system"},
      {"resolve", "Negation relation and rational addition formula"},
      {"verify", "All residual suites"},
      {"period", "Period detection"},
      {"all", "Full pipeline"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), true);
  auto* catalog = app.add_subcommand("catalog", "Every built-in family end to end");
  add_common(catalog, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  aat::RunSettings settings{timings};
  aat::RunResult result;
  int exit_code = 0;
  if (catalog->parsed()) {
    aat::ProblemOptions opts;
    apply(ov, opts);
    result = aat::run_catalog(opts, settings);
    exit_code = result.pass ? 0 : 1;
  } else {
    auto stage = *aat::parse_stage(app.get_subcommands().front()->get_name());
    try {
      aat::ProblemSpec spec = aat::load_problem(problem);
      apply(ov, spec.options);
      result = aat::run_problem(spec, stage, settings);
      exit_code = result.pass ? 0 : 1;
    } catch (const std::ios_base::failure& e) {
      std::cerr << "aat: " << problem << ": file not found\n";
      result.report = aat::load_failure_report(problem, "file not found", ov.seed.value_or(42));
      exit_code = 2;
    } catch (const std::exception& e) {
      std::cerr << "aat: " << problem << ": " << e.what() << "\n";
      result.report = aat::load_failure_report(problem, e.what(), ov.seed.value_or(42));
      exit_code = 2;
    }
  }
  try {
    aat::emit_report(result.report, output);
  } catch (const std::exception& e) {
    std::cerr << "aat: " << e.what() << "\n";
    return 2;
  }
  summarize(result.report);
  return exit_code;
}

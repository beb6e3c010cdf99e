#pragma once

#include <optional>
#include <string>

#include "aat/problem.hpp"
#include "aat/report.hpp"

namespace aat {

enum class Stage { Derive, Variety, Resolve, Verify, Period, All };

std::optional<Stage> parse_stage(const std::string& s);
std::string to_string(Stage s);

struct RunSettings {
  bool timings = false;  // wall-clock seconds per stage; makes reports differ between runs
};

struct RunResult {
  Json report;
  bool pass = false;  // every verdict passed and no stage failed
};

/// Runs the stages a subcommand needs:
///   derive   first-order relations P_kp and the elimination trace
///   variety  + primitive element, V, derivative expressions, Painleve system
///   resolve  + negation relation and addition formula
///   verify   + group law, recursion and quasi-periodicity residual suites
///   period   period detection only
///   all      everything
/// A stage error stops the run; the report then carries a "failure" section.
RunResult run_problem(const ProblemSpec& spec, Stage stage, const RunSettings& settings = {});

/// Every catalog family end to end with the given options.  Families without
/// an addition-theorem generator get the numeric checks only (group law,
/// lattice shifts, periods).
RunResult run_catalog(const ProblemOptions& options, const RunSettings& settings = {});

/// Report skeleton for a problem file that failed to load.
Json load_failure_report(const std::string& source, const std::string& message, std::uint64_t seed);

}  // namespace aat

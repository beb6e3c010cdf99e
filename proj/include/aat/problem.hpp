#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aat/mpoly.hpp"

namespace aat {

enum class SpecializationMode { ExactPoint, NumericReconstruct };

std::string to_string(SpecializationMode m);
SpecializationMode parse_mode(const std::string& s);

struct ProblemOptions {
  double tol = 1e-9;
  int samples = 100;
  std::uint64_t seed = 42;
  SpecializationMode mode = SpecializationMode::ExactPoint;
  int retries = 6;
  double box = 1.2;
  double period_box = 7.0;
  int period_grid = 9;
};

/// A validated problem: n, the standard ring, the AAT polynomials and the
/// numeric family they are checked against.
struct ProblemSpec {
  std::string source;  // file name or "<builtin:...>"
  int n = 1;
  std::string family = "none";
  std::vector<std::string> param_names;  // declaration order
  std::map<std::string, Rat> params;
  std::optional<MPoly> phi;  // rational family only, in the ring {u}
  RingPtr ring;
  std::vector<MPoly> aat;
  std::vector<bool> generated;  // G_k came from `auto`
  ProblemOptions options;
};

/// Problem-file text (see README for the format).  Errors: ParseError with
/// line/column for malformed lines, StructuralError for arity and alphabet
/// violations ("expected 2 AAT polynomials", degree 0 in Lk, ...).
ProblemSpec parse_problem(const std::string& text, const std::string& source = "<string>");

/// Reads and parses a file; throws std::ios_base::failure("file not found")
/// when it cannot be opened.
ProblemSpec load_problem(const std::string& path);

/// Built-in problem for a catalog family with default parameters.
ProblemSpec builtin_problem(const std::string& family);

}  // namespace aat

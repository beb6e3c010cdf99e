#pragma once

#include <json.hpp>
#include <string>

#include "aat/backend.hpp"
#include "aat/ratfn.hpp"
#include "aat/residual.hpp"

namespace aat {

/// Object keys are kept sorted, so serialization is stable.
using Json = nlohmann::json;

Json to_json(const ResidualReport& r);
/// {"num": ..., "den": ...} in canonical polynomial text.
Json to_json(const RatFn& f);
/// [[re, im], ...]
Json to_json(const VecC& v);

inline const char* verdict(bool pass) { return pass ? "pass" : "fail"; }

/// Two-space indented text with a trailing newline.
std::string serialize_report(const Json& report);

/// Writes the report to `path`, or to stdout when path is "-".  Throws
/// std::ios_base::failure on I/O errors.
void emit_report(const Json& report, const std::string& path);

/// True when every value in the verdicts object is "pass".
bool verdicts_pass(const Json& verdicts);

}  // namespace aat

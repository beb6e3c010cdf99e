#include "aat/problem.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "aat/backend.hpp"
#include "aat/errors.hpp"
#include "aat/generators.hpp"
#include "aat/parse.hpp"

namespace aat {

std::string to_string(SpecializationMode m) {
  return m == SpecializationMode::ExactPoint ? "exact-point" : "numeric-reconstruct";
}

SpecializationMode parse_mode(const std::string& s) {
  if (s == "exact-point") return SpecializationMode::ExactPoint;
  if (s == "numeric-reconstruct") return SpecializationMode::NumericReconstruct;
  throw StructuralError("unknown specialization mode '" + s + "' (exact-point | numeric-reconstruct)");
}

namespace {

struct Entry {
  std::string key, value;
  std::size_t line, value_col;
};

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    if (lead) *lead = s.size();
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r");
  if (lead) *lead = b;
  return s.substr(b, e - b + 1);
}

Rat parse_rational_literal(const Entry& e) {
  static const std::regex re(R"(^(-?\d+)(?:/(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(e.value, m, re))
    throw ParseError("expected a rational number, got '" + e.value + "'", e.line, e.value_col);
  Integer den = m[2].matched ? Integer(m[2].str()) : Integer(1);
  if (den == 0) throw ParseError("zero denominator", e.line, e.value_col);
  return make_rat(Integer(m[1].str()), den);
}

double parse_double(const Entry& e) {
  try {
    std::size_t used = 0;
    double d = std::stod(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ParseError("expected a number for '" + e.key + "'", e.line, e.value_col);
  }
}

long long parse_int(const Entry& e) {
  static const std::regex re(R"(^-?\d+$)");
  if (!std::regex_match(e.value, re))
    throw ParseError("expected an integer for '" + e.key + "'", e.line, e.value_col);
  return std::stoll(e.value);
}

bool is_identifier(const std::string& s) {
  static const std::regex re(R"(^[A-Za-z_][A-Za-z0-9_]*$)");
  return std::regex_match(s, re);
}

// Symbols of the standard ring allowed inside G_k.
bool in_aat_alphabet(const std::string& name, int n) {
  std::smatch m;
  static const std::regex re(R"(^(L|x|y)(\d+)$)");
  if (!std::regex_match(name, m, re)) return false;
  int k = std::stoi(m[2].str());
  return k >= 1 && k <= n;
}

}  // namespace

ProblemSpec parse_problem(const std::string& text, const std::string& source) {
  std::map<std::string, std::vector<Entry>> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::size_t lead = 0;
    std::string t = trim(line, &lead);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("malformed section header", lineno, lead + 1);
      current = trim(t.substr(1, t.size() - 2));
      if (current != "mapping" && current != "aat" && current != "options")
        throw ParseError("unknown section [" + current + "]", lineno, lead + 1);
      sections[current];
      continue;
    }
    if (current.empty()) throw ParseError("entry outside of any section", lineno, lead + 1);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno, lead + 1);
    std::string key = trim(line.substr(0, eq));
    std::size_t vlead = 0;
    std::string value = trim(line.substr(eq + 1), &vlead);
    if (key.empty()) throw ParseError("missing key before '='", lineno, lead + 1);
    if (value.empty()) throw ParseError("missing value after '='", lineno, eq + 2);
    sections[current].push_back(Entry{key, value, lineno, eq + 2 + vlead});
  }
  if (!sections.count("mapping")) throw StructuralError("missing [mapping] section");
  if (!sections.count("aat")) throw StructuralError("missing [aat] section");

  ProblemSpec spec;
  spec.source = source;
  bool have_n = false;
  std::optional<Entry> phi_entry;
  for (const auto& e : sections["mapping"]) {
    if (e.key == "n") {
      long long n = parse_int(e);
      if (n < 1 || n > 4) throw ParseError("n must be between 1 and 4", e.line, e.value_col);
      spec.n = int(n);
      have_n = true;
    } else if (e.key == "family") {
      spec.family = e.value;
      if (spec.family != "none") {
        try {
          family_dimension(spec.family);
        } catch (const StructuralError&) {
          throw ParseError("unknown family '" + e.value + "'", e.line, e.value_col);
        }
      }
    } else if (e.key.rfind("param ", 0) == 0 || e.key.rfind("param\t", 0) == 0) {
      std::string name = trim(e.key.substr(6));
      if (!is_identifier(name)) throw ParseError("bad parameter name '" + name + "'", e.line, 1);
      if (spec.params.count(name)) throw ParseError("duplicate parameter '" + name + "'", e.line, 1);
      spec.params[name] = parse_rational_literal(e);
      spec.param_names.push_back(name);
    } else if (e.key == "phi") {
      phi_entry = e;
    } else {
      throw ParseError("unknown key '" + e.key + "' in [mapping]", e.line, 1);
    }
  }
  if (!have_n) throw StructuralError("[mapping] must set n");
  if (spec.family != "none" && family_dimension(spec.family) != spec.n)
    throw StructuralError("family " + spec.family + " has dimension " +
                          std::to_string(family_dimension(spec.family)) + " but n = " + std::to_string(spec.n));
  if (phi_entry) {
    if (spec.family != "rational") throw ParseError("phi is only used by the rational family", phi_entry->line, 1);
    spec.phi = parse_poly(phi_entry->value, rational_family_ring(), phi_entry->line, phi_entry->value_col);
  }

  for (const auto& e : sections["options"]) {
    auto& o = spec.options;
    if (e.key == "tol") o.tol = parse_double(e);
    else if (e.key == "samples") o.samples = int(parse_int(e));
    else if (e.key == "seed") o.seed = std::uint64_t(parse_int(e));
    else if (e.key == "mode") {
      try {
        o.mode = parse_mode(e.value);
      } catch (const StructuralError& err) {
        throw ParseError(err.what(), e.line, e.value_col);
      }
    } else if (e.key == "retries") o.retries = int(parse_int(e));
    else if (e.key == "box") o.box = parse_double(e);
    else if (e.key == "period_box") o.period_box = parse_double(e);
    else if (e.key == "period_grid") o.period_grid = int(parse_int(e));
    else throw ParseError("unknown option '" + e.key + "'", e.line, 1);
  }
  if (spec.options.samples < 1) throw StructuralError("samples must be positive");
  if (spec.options.tol <= 0) throw StructuralError("tol must be positive");

  spec.ring = make_standard_ring(spec.n, spec.param_names);
  std::map<int, const Entry*> gs;
  static const std::regex gre(R"(^G(\d+)$)");
  for (const auto& e : sections["aat"]) {
    std::smatch m;
    if (!std::regex_match(e.key, m, gre)) throw ParseError("expected G<k> = ..., got '" + e.key + "'", e.line, 1);
    int k = std::stoi(m[1].str());
    if (k < 1 || k > spec.n) throw ParseError("G" + std::to_string(k) + " out of range for n = " + std::to_string(spec.n), e.line, 1);
    if (gs.count(k)) throw ParseError("duplicate G" + std::to_string(k), e.line, 1);
    gs[k] = &e;
  }
  if (int(gs.size()) != spec.n)
    throw StructuralError("expected " + std::to_string(spec.n) + " AAT polynomials, found " +
                          std::to_string(gs.size()));

  std::optional<std::vector<MPoly>> generated;
  for (int k = 1; k <= spec.n; ++k) {
    const Entry& e = *gs[k];
    if (e.value == "auto") {
      if (spec.family == "none" || !has_generator(spec.family))
        throw ParseError("'auto' needs a family with a built-in generator", e.line, e.value_col);
      if (!generated) generated = generate_aat(spec.family, spec.ring, spec.params, spec.phi);
      spec.aat.push_back((*generated)[k - 1]);
      spec.generated.push_back(true);
    } else {
      spec.aat.push_back(parse_poly(e.value, spec.ring, e.line, e.value_col));
      spec.generated.push_back(false);
    }
    const MPoly& g = spec.aat.back();
    for (std::size_t s : g.symbols_used()) {
      if (spec.ring->is_parameter(s)) continue;
      if (!in_aat_alphabet(spec.ring->name(s), spec.n))
        throw StructuralError("G" + std::to_string(k) + " uses '" + spec.ring->name(s) +
                              "', outside the alphabet L1..Ln, x1..xn, y1..yn and parameters");
    }
    if (g.degree(l_name(k)) < 1)
      throw StructuralError("G" + std::to_string(k) + " has degree 0 in " + l_name(k));
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("file not found: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_problem(ss.str(), path);
}

ProblemSpec builtin_problem(const std::string& family) {
  int n = family_dimension(family);
  if (!has_generator(family))
    throw StructuralError("family '" + family + "' has no built-in addition theorem");
  std::ostringstream text;
  text << "[mapping]\nn = " << n << "\nfamily = " << family << "\n";
  bool lattice = family == "weierstrass" || family == "singular2-case4";
  if (lattice) text << "param g2 = 4\nparam g3 = 0\n";
  if (family == "singular2-case4") text << "param eps = 1\n";
  text << "[aat]\n";
  for (int k = 1; k <= n; ++k) text << "G" << k << " = auto\n";
  return parse_problem(text.str(), "<builtin:" + family + ">");
}

}  // namespace aat

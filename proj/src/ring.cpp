#include "aat/ring.hpp"

#include <set>

#include "aat/errors.hpp"
#include "aat/mpoly.hpp"

namespace aat {

VarRing::VarRing(std::vector<std::string> variables, std::vector<std::string> parameters)
    : num_vars_(variables.size()) {
  names_ = std::move(variables);
  names_.insert(names_.end(), parameters.begin(), parameters.end());
  if (names_.size() > kMaxSymbols)
    throw StructuralError("ring has " + std::to_string(names_.size()) + " symbols; limit is " +
                          std::to_string(kMaxSymbols));
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw StructuralError("empty symbol name");
    if (!seen.insert(n).second) throw StructuralError("duplicate symbol '" + n + "'");
  }
}

std::optional<std::size_t> VarRing::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t VarRing::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw StructuralError("unknown symbol '" + std::string(name) + "'");
  return *i;
}

RingPtr make_ring(std::vector<std::string> variables, std::vector<std::string> parameters) {
  return std::make_shared<const VarRing>(std::move(variables), std::move(parameters));
}

std::string z_name(int k, int p) { return "z" + std::to_string(k) + "_" + std::to_string(p); }
std::string w_name(int k, int p) { return "w" + std::to_string(k) + "_" + std::to_string(p); }
std::string x_name(int k) { return "x" + std::to_string(k); }
std::string y_name(int k) { return "y" + std::to_string(k); }
std::string l_name(int k) { return "L" + std::to_string(k); }

RingPtr make_standard_ring(int n, std::vector<std::string> parameters) {
  std::vector<std::string> vars{"theta"};
  for (int k = 1; k <= n; ++k) vars.push_back(l_name(k));
  for (int k = 1; k <= n; ++k)
    for (int p = 1; p <= n; ++p) vars.push_back(z_name(k, p));
  for (int k = 0; k <= n; ++k) vars.push_back(x_name(k));
  for (int k = 0; k <= n; ++k) vars.push_back(y_name(k));
  for (int k = 1; k <= n; ++k)
    for (int p = 1; p <= n; ++p) vars.push_back(w_name(k, p));
  return make_ring(std::move(vars), std::move(parameters));
}

}  // namespace aat

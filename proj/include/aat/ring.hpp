#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aat {

/// Ordered alphabet of ring variables followed by named parameters.
///
/// Parameters are symbols treated as transcendental constants (g2, g3, ...).
/// They take part in exact arithmetic like variables but are never
/// eliminated, and numeric evaluation requires a value for each of them.
/// The declaration order fixes the lexicographic term order.
class VarRing {
 public:
  VarRing(std::vector<std::string> variables, std::vector<std::string> parameters = {});

  std::size_t size() const { return names_.size(); }
  std::size_t num_variables() const { return num_vars_; }
  std::size_t num_parameters() const { return names_.size() - num_vars_; }

  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  bool is_parameter(std::size_t index) const { return index >= num_vars_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws StructuralError when the symbol is unknown.
  std::size_t index(std::string_view name) const;

  bool operator==(const VarRing& other) const {
    return names_ == other.names_ && num_vars_ == other.num_vars_;
  }

 private:
  std::vector<std::string> names_;
  std::size_t num_vars_;
};

using RingPtr = std::shared_ptr<const VarRing>;

RingPtr make_ring(std::vector<std::string> variables, std::vector<std::string> parameters = {});

/// Standard alphabet for an n-dimensional problem:
/// theta, L1..Ln, z{k}_{p}, x0..xn, y0..yn, w{k}_{p}, then the parameters.
/// x0/y0 are the theta-slots used by the rational addition formulas.
RingPtr make_standard_ring(int n, std::vector<std::string> parameters);

std::string z_name(int k, int p);
std::string w_name(int k, int p);
std::string x_name(int k);
std::string y_name(int k);
std::string l_name(int k);

}  // namespace aat

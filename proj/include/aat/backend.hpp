#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aat/mpoly.hpp"
#include "aat/weierstrass.hpp"

namespace aat {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

/// Truncated Laurent series sum_i c[i] t^(low + i) with rational coefficients.
struct Laurent {
  int low = 0;
  std::vector<Rat> c;

  /// Exact constant, represented to order kConstantOrder.
  static Laurent constant(const Rat& r) {
    Laurent l{0, std::vector<Rat>(kConstantOrder, Rat(0))};
    l.c[0] = r;
    return l;
  }
  static constexpr int kConstantOrder = 64;
  int high() const { return low + int(c.size()); }  // first order not represented
};

Laurent operator*(const Laurent& a, const Laurent& b);
Laurent operator+(const Laurent& a, const Laurent& b);
Laurent scaled(const Laurent& a, const Rat& r);

/// A point (or a one-parameter germ v(t) approaching a pole) at which the
/// mapping and its first derivatives are known exactly.
struct SpecialPoint {
  std::string label;
  bool germ = false;                       // coefficients are Laurent series in t
  std::vector<Laurent> value;              // phi_k
  std::vector<std::vector<Laurent>> jac;   // d phi_k / d u_p
  std::optional<VecC> u;                   // numeric location, when it exists
};

/// Numeric evaluator for a concrete mapping Phi: C^n -> C^n.
class MappingBackend {
 public:
  virtual ~MappingBackend() = default;

  int n() const { return n_; }
  const std::string& family() const { return family_; }
  /// Exact parameter values shared with the problem's ring parameters.
  const std::map<std::string, Rat>& parameters() const { return params_; }

  /// Throw PoleError on the pole set.
  virtual VecC value(const VecC& u) const = 0;
  /// J(k, p) = d phi_k / d u_p.
  virtual MatC jacobian(const VecC& u) const = 0;
  /// H[k](p, q) = d^2 phi_k / d u_p d u_q.
  virtual std::vector<MatC> hessian(const VecC& u) const = 0;

  /// Distance from u to the recorded pole set (infinity when entire).
  virtual double pole_distance(const VecC& u) const;
  /// Exact points first, then pole germs, in a fixed order.
  virtual std::vector<SpecialPoint> special_points() const { return {}; }
  /// Exact Phi(0) when finite in every component.
  virtual std::optional<std::vector<Rat>> value_at_zero() const { return std::nullopt; }
  /// Lattice of the underlying Weierstrass functions, if any.
  virtual const Lattice* lattice() const { return nullptr; }

 protected:
  MappingBackend(int n, std::string family, std::map<std::string, Rat> params)
      : n_(n), family_(std::move(family)), params_(std::move(params)) {}

 private:
  int n_;
  std::string family_;
  std::map<std::string, Rat> params_;
};

using BackendPtr = std::shared_ptr<const MappingBackend>;

/// Known family identifiers, in catalog order.
const std::vector<std::string>& family_names();
int family_dimension(const std::string& family);

/// Parameters: exp(c = 1); rational(phi, a polynomial in the single symbol u,
/// default u); weierstrass(g2, g3); singular2-case4(g2, g3, eps = 1);
/// singular2-case5(g2, g3, a = 1/2).  Throws StructuralError for unknown
/// families and DomainError for a degenerate lattice.
BackendPtr make_backend(const std::string& family, const std::map<std::string, Rat>& params,
                        const std::optional<MPoly>& phi = std::nullopt);

/// Ring {u} used for the rational family's phi.
RingPtr rational_family_ring();

}  // namespace aat

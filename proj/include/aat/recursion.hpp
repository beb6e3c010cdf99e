#pragma once

#include <map>
#include <vector>

#include "aat/backend.hpp"
#include "aat/elimination.hpp"
#include "aat/ratfn.hpp"
#include "aat/residual.hpp"

namespace aat {

/// Higher partial derivatives of the mapping from the first-order relations.
/// Differentiating P_kp(zk_p; x) = 0 along u_q gives
///   d^2 phi_k / du_p du_q = -(sum_i dP_kp/dx_i * zi_q) / (dP_kp/dzk_p),
/// a rational function of z and x.  Further orders apply the total
/// derivative D_q: x_i -> zi_q, zk_p -> that second derivative.
class DerivativeRecursion {
 public:
  DerivativeRecursion(const Derivation& d, RingPtr ring, int n);

  int n() const { return n_; }
  const RingPtr& ring() const { return ring_; }

  /// Total derivative of f along u_q (q is 1-based).
  RatFn total_derivative(const RatFn& f, int q) const;

  /// Symbolic d^m phi_k / du_{i1} ... du_{im} for m = idx.size() in 1..3.
  RatFn symbolic(int k, const std::vector<int>& idx) const;

  /// dP_kp / dzk_p, the quantity that must not vanish.
  const MPoly& pivot(int k, int p) const;

 private:
  int n_;
  RingPtr ring_;
  std::map<std::pair<int, int>, MPoly> P_, pivot_;
  std::map<std::vector<int>, RatFn> second_;  // key {k, p, q}
};

/// Numeric value of the recursion at u.  Throws DomainError("recursion
/// singular at u") when some |dP_kp/dzk_p| < 1e-12 * scale there.
cplx higher_derivative(const DerivativeRecursion& rec, const MappingBackend& backend, int k,
                       const std::vector<int>& idx, const VecC& u);

/// x and z values of the standard ring at u; other symbols are NaN.
std::vector<cplx> bind_point(const RingPtr& ring, const MappingBackend& backend, const VecC& u);

enum class TaylorMatch { Match, Mismatch, NotApplicable, Indeterminate };
std::string to_string(TaylorMatch t);

/// Whether the recursion's derivatives through `order` (at most 3) agree at a
/// and b.  NotApplicable when Phi or Phi' differ at a, b; Indeterminate when
/// the recursion is singular at either point.
TaylorMatch taylor_match_check(const DerivativeRecursion& rec, const MappingBackend& backend, const VecC& a,
                               const VecC& b, int order, double tol);

/// Recursion against central differences with step h: order 2 differences the
/// Jacobian, order 3 the Hessian.  Relative error over `points` pole-free
/// draws in [-1.2, 1.2]^2 per coordinate, all k and index tuples; singular
/// recursion points are redrawn.
ResidualReport recursion_fd_check(const DerivativeRecursion& rec, const MappingBackend& backend, int order,
                                  int points, std::uint64_t seed, double h = 1e-5, double tol = 1e-6);

}  // namespace aat

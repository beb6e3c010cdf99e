#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aat/elimination.hpp"
#include "aat/ratfn.hpp"
#include "aat/residual.hpp"
#include "aat/variety.hpp"

namespace aat {

struct NegationRelation {
  std::string mode;         // "value-at-zero" or "leading-coefficient"
  std::vector<MPoly> D;     // D_k in (x; y)
  std::vector<MPoly> E;     // E_k in (y_k; x)
  std::vector<std::string> E_source;  // "elimination" from D, or "interpolation" from samples
  std::vector<ResidualReport> residuals;
};

/// D_k = G_k with L_k replaced by phi_k(0) when Phi(0) is finite.  When
/// phi_k(0) is a pole, G_k / L_k^d tends to its leading coefficient in L_k as
/// v -> -u, so D_k is that coefficient.  E_k eliminates the other y_j and keeps
/// the smallest factor vanishing on (Phi(u); Phi(-u)).  When no factor of the
/// eliminated D involves y_k, E_k is the lowest-degree relation with small
/// rational coefficients fitted on samples, then vetted the same way.
NegationRelation derive_negation(const AATSystem& sys, BackendPtr backend, const SamplingOptions& opts);

struct AdditionFormula {
  bool resolved = false;
  std::string status;        // "resolved" or the reason it is not
  std::vector<RatFn> R;      // R_0 (theta slot), R_1 in x0, x1, y0, y1
  std::string divisor;       // excluded divisor, e.g. "x1 = y1"
  std::string branch;        // "+" or "-" for degree 2, empty for degree 1
  ResidualReport agreement;  // R_1 against phi(u + v)
  ResidualReport theta_agreement;  // R_0 against theta(u + v)
};

/// Rational addition formula for n = 1 and deg_{L1} G_1 in {1, 2}.  Degree 2
/// uses the ansatz sqrt(disc) = s*X0*Y0 + t, with X0, Y0 the theta slots
/// shifted so that V has no linear term in theta.  Failure of the ansatz
/// yields resolved = false and status "unresolved: ...".
AdditionFormula resolve_addition(const AATSystem& sys, const VarietySpec& variety, BackendPtr backend,
                                 const SamplingOptions& opts, double tol = 1e-8);

/// A point (theta; x1..xn) of the variety; nullopt coordinates are at infinity.
struct VarietyPoint {
  std::optional<cplx> theta;
  std::vector<std::optional<cplx>> x;
  std::optional<VecC> u;  // pre-image, present for backend-generated points

  bool finite() const;
};

VarietyPoint point_at(const MappingBackend& backend, const AlphaMatrix& alpha, const VecC& u);
VarietyPoint identity_point(const MappingBackend& backend, const AlphaMatrix& alpha);

/// Backend mode: the point at u1 + u2.
VarietyPoint point_add(const VarietyPoint& a, const VarietyPoint& b, const MappingBackend& backend,
                       const AlphaMatrix& alpha);
/// Formula mode: evaluates R_0 and R_1.  Throws DomainError("divisor
/// degeneracy") when a denominator vanishes at the inputs.
VarietyPoint point_add(const VarietyPoint& a, const VarietyPoint& b, const AdditionFormula& f, const RingPtr& ring);
/// Backend mode: the point at u1 - u2.
VarietyPoint point_sub(const VarietyPoint& a, const VarietyPoint& b, const MappingBackend& backend,
                       const AlphaMatrix& alpha);

/// Largest relative coordinate difference; infinity when the pole patterns differ.
double point_distance(const VarietyPoint& a, const VarietyPoint& b);

/// |V(theta; x)| scaled by its largest term, for a finite point.
double closure_residual(const MPoly& V, const VarietyPoint& p);

/// Commutativity, associativity, identity and inverse of the backend-mode
/// group law on `triples` random triples; one report per axiom.
std::vector<ResidualReport> group_law_checks(BackendPtr backend, const AlphaMatrix& alpha, const SamplingOptions& opts,
                                             int triples = 50, double tol = 1e-8);

}  // namespace aat

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aat/elimination.hpp"
#include "aat/ratfn.hpp"
#include "aat/residual.hpp"

namespace aat {

struct VarietySpec {
  explicit VarietySpec(MPoly V_) : V(std::move(V_)) {}
  AlphaMatrix alpha;
  MPoly V;
  int h = 0;             // degree of V in theta
  int degree_bound = 0;  // product of deg_{zk_p} P_kp
  bool separable = false;
  ResidualReport residual;
  /// z_kp as a rational function of theta and x, reduced modulo V.
  std::map<std::pair<int, int>, RatFn> derivative_expressions;
  std::vector<ResidualReport> expression_residuals;
  std::vector<std::string> search_log;  // one line per rejected alpha
};

/// Alpha matrices in search order: the identity, the unit matrices in
/// row-major order, then every nonzero matrix with entries in {-2..2}.
std::vector<AlphaMatrix> alpha_search_order(int n);

/// Builds V and the derivative expressions for one alpha; nullopt (with the
/// reason) when no vanishing separable factor exists or some z_kp is not
/// expressible in theta and x.
std::optional<VarietySpec> variety_for_alpha(const AATSystem& sys, const Derivation& d, const AlphaMatrix& alpha,
                                             BackendPtr backend, const SamplingOptions& opts, std::string& reason);

/// First alpha in search order that yields a variety.  Throws
/// StageError("variety", "no primitive element found with |alpha| <= 2").
VarietySpec find_primitive_element(const AATSystem& sys, const Derivation& d, BackendPtr backend,
                                   const SamplingOptions& opts);

RatFn express_derivative(const VarietySpec& spec, int k, int p);

/// Exact check: P_kp with z_kp replaced by its expression is 0 modulo V.
bool expression_consistent(const VarietySpec& spec, const MPoly& Pkp, int k, int p);

struct PijMatrix {
  explicit PijMatrix(MPoly J_) : J(std::move(J_)) {}
  int n = 0;
  RingPtr ring;
  MPoly J;                            // det [z_ij]
  std::vector<std::vector<RatFn>> p;  // p[i][j] = (1/J) dJ/dz_ij
};

/// Over the standard ring of dimension n unless a ring is given.
PijMatrix build_pij(int n, RingPtr ring = nullptr);

/// Inverse of [z_ij] over the rational functions by Gauss-Jordan elimination.
std::vector<std::vector<RatFn>> inverse_matrix(const std::vector<std::vector<RatFn>>& m);

/// p_ij == (inverse of [z_ij])_{ji} for every entry, exactly.
bool adjugate_identity(const PijMatrix& pij);

struct PainleveSystem {
  /// entries[i][j] = du_i/dx_j = p_ji in theta and x; nullopt on a pole modulo V.
  std::vector<std::vector<std::optional<RatFn>>> entries;
  std::vector<std::string> errors;
  std::vector<std::string> lines;  // "du1 = dx1/x1" style, "du = ..." when n = 1
};

PainleveSystem painleve_system(const VarietySpec& spec, const PijMatrix& pij);

}  // namespace aat

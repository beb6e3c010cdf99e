#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aat/backend.hpp"
#include "aat/mpoly.hpp"
#include "aat/problem.hpp"
#include "aat/residual.hpp"

namespace aat {

/// G_1..G_n over the standard ring.
struct AATSystem {
  int n = 1;
  RingPtr ring;
  std::vector<MPoly> polys;
};

/// Bound parameter values are substituted into G_k, so the pipeline runs over Q.
/// Checks deg_{Lk} G_k >= 1, no z/w/theta symbols, no L_j with j != k.
AATSystem make_system(const ProblemSpec& spec);

struct EliminationOptions {
  SamplingOptions sampling;
  SpecializationMode mode = SpecializationMode::ExactPoint;
  int retries = 6;
};

EliminationOptions elimination_options(const ProblemOptions& o);

struct SpecializationRecord {
  std::string mode;   // mode that produced h
  std::string point;  // label of the v that was used
  int retries = 0;    // failed attempts before success
  std::vector<std::string> attempts;  // "label: outcome" for every attempt
};

struct TraceEntry {
  int k = 0, p = 0;
  MPoly delta, gcd, eliminant;
  std::optional<MPoly> specialized;
  SpecializationRecord record;
  std::string note;  // empty when the entry is complete
};

struct FirstOrderRelation {
  FirstOrderRelation(int k_, int p_, MPoly P_) : k(k_), p(p_), P(std::move(P_)) {}
  int k = 0, p = 0;
  MPoly P;
  std::vector<std::string> order;  // z symbols eliminated, in order
  int degree_bound = 0;            // deg_{Lk}(G_k) * deg(Delta_kp)
  ResidualReport residual;
  bool verified = false;
};

struct Derivation {
  std::vector<TraceEntry> trace;
  std::vector<FirstOrderRelation> relations;  // (k, p) in row-major order when complete
  std::vector<std::string> failures;
  bool complete(int n) const { return int(relations.size()) == n * n; }
  const FirstOrderRelation* find(int k, int p) const;
};

/// Delta_kp = sum_i dG_k/dx_i * zi_p - dG_k/dy_i * wi_p.
/// Throws StructuralError when it vanishes identically (G_k free of x and y).
MPoly cross_difference(const AATSystem& sys, int k, int p);

/// (g, H): g = gcd(G_k, Delta), H = Res_{Lk}(G_k/g, Delta/g), or Delta/g when
/// Delta/g is free of Lk.  H may be zero; callers record that case.
std::pair<MPoly, MPoly> gcd_and_eliminant(const MPoly& Gk, const MPoly& delta, int k);

/// Fixes v in H: y_i and w_ip become numbers.  Exact points and pole germs are
/// tried first in exact-point mode, then generic points with rational
/// reconstruction.  The result is free of y and w, nonzero, involves some
/// z symbol, and has its z-free content removed.  Throws
/// StageError("specialize", "no generic specialization found") after
/// `retries` failed attempts.
MPoly specialize_v(const MPoly& H, const MappingBackend& backend, const EliminationOptions& opts,
                   SpecializationRecord& record);

/// Substitutes one special point or germ; nullopt when it degenerates.
std::optional<MPoly> substitute_special_point(const MPoly& H, const SpecialPoint& sp, int n);

/// Candidate factors of p in `symbol` ordered by degree; returns the first
/// whose residual passes on the backend, or nullopt (report holds the last
/// tried factor's residual).
std::optional<MPoly> select_vanishing_factor(const MPoly& p, std::size_t symbol, BackendPtr backend,
                                             const SamplingOptions& opts, ResidualReport& report,
                                             const AlphaMatrix* alpha = nullptr,
                                             const std::vector<MPoly>& hints = {});

/// Full first-order derivation: trace plus P_kp for every (k, p).
Derivation derive_first_order(const AATSystem& sys, BackendPtr backend, const EliminationOptions& opts);

/// A relation among the selected n+1 symbols (x_k and zk_p names), obtained by
/// eliminating the other symbols from the P_kp set; vetted on the backend.
MPoly verify_general_dependence(const AATSystem& sys, const Derivation& d,
                                const std::vector<std::string>& selection, BackendPtr backend,
                                const SamplingOptions& opts, ResidualReport& report);

/// Eliminates `vars` in order.  Members containing the variable are replaced
/// by their resultants against the one of lowest degree; a variable held by a
/// single member drops that member.  Results are primitive over Z.
std::vector<MPoly> eliminate_symbols(std::vector<MPoly> S, const std::vector<std::size_t>& vars);

/// x_i <-> y_i and zi_p <-> wi_p.
MPoly swap_sides(const MPoly& p, int n);

/// gcd of the coefficients of p viewed as a polynomial in all of `symbols`.
MPoly content_in_set(const MPoly& p, const std::vector<std::size_t>& symbols);

}  // namespace aat

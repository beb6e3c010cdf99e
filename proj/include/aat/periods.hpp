#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aat/backend.hpp"
#include "aat/residual.hpp"

namespace aat {

struct PeriodOptions {
  double box = 7.0;  // seeds b = a + offset, offset in [-box, box]^2 per coordinate
  int grid = 9;      // seeds per real axis
  double tol = 1e-9;
  int samples = 50;
  std::uint64_t seed = 42;
};

struct PeriodCandidate {
  VecC p;
  VecC a, b;  // witness pair with Phi(a) = Phi(b), Phi'(a) = Phi'(b)
  double residual = 0;  // max relative |Phi(u + p) - Phi(u)| over the samples
  bool pass = false;
  std::string note;  // lattice coordinates when the backend has a lattice
};

struct PeriodResult {
  std::vector<PeriodCandidate> basis;  // reduced generators, at most 2n
  std::vector<PeriodCandidate> extra;  // verified periods left over beyond rank 2n
  int seeds = 0, converged = 0, witnesses = 0;
};

/// Newton solves Phi(b) = Phi(a) from a grid of seeds around a, keeps the
/// solutions with Phi'(b) = Phi'(a), verifies p = b - a on random samples and
/// reduces the verified periods to a basis.
PeriodResult detect_period(BackendPtr backend, const PeriodOptions& opts);

/// Max relative |Phi(u + p) - Phi(u)| over `samples` pole-free draws.
double period_residual(const MappingBackend& backend, const VecC& p, int samples, std::uint64_t seed, double box);

/// Real coordinates (c_i) with p ~ sum c_i basis_i, and the fit residual.
std::pair<std::vector<double>, double> lattice_coordinates(const std::vector<VecC>& basis, const VecC& p);

/// p is an integer combination of the basis up to `tol` relative.
bool in_lattice(const std::vector<VecC>& basis, const VecC& p, double tol = 1e-6);

/// Integer matrix M with basis_i = sum_j M_ij reference_j, when it exists.
std::optional<std::vector<std::vector<long>>> unimodular_relation(const std::vector<VecC>& basis,
                                                                  const std::vector<VecC>& reference, double tol = 1e-6);

/// zeta(u + 2 omega_i) - zeta(u) - 2 eta_i over random u, absolute.
ResidualReport zeta_shift_check(const Lattice& lat, int i, int samples, std::uint64_t seed, double tol = 1e-9);

/// sigma(u + 2 omega_i) + sigma(u) exp(2 eta_i (u + omega_i)), relative.
ResidualReport sigma_shift_check(const Lattice& lat, int i, int samples, std::uint64_t seed, double tol = 1e-8);

/// Solves Phi(b) = target by damped Newton from `seed`; nullopt without convergence.
std::optional<VecC> newton_preimage(const MappingBackend& backend, const VecC& target, VecC seed, int max_iter = 60);

}  // namespace aat

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "aat/backend.hpp"
#include "aat/mpoly.hpp"
#include "aat/ratfn.hpp"

namespace aat {

/// Integer weights alpha[k][p] of theta = sum alpha_kp z_kp.
using AlphaMatrix = std::vector<std::vector<int>>;

struct SamplingOptions {
  int samples = 100;
  std::uint64_t seed = 42;
  double box = 1.2;         // each complex coordinate drawn from [-box, box]^2
  double exclusion = 0.05;  // minimum distance to the pole set
  double tol = 1e-9;
};

struct Draw {
  VecC u, v;
};

/// Uniform draws in the sampling box, re-drawn when u, v or u + v fall near a
/// pole.  Redraws are counted; the caller stops at 10x the sample count.
class Sampler {
 public:
  Sampler(BackendPtr backend, const SamplingOptions& opts);
  std::optional<Draw> next();
  int skipped() const { return skipped_; }

 private:
  VecC draw();
  BackendPtr backend_;
  SamplingOptions opts_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unif_;
  int skipped_ = 0;
};

/// Numeric value of every ring symbol at (u, v):
/// x_k, z_kp at u; y_k, w_kp at v; L_k at u + v; theta and x0 = theta(u),
/// y0 = theta(v) when alpha is given; parameters from the backend.
/// Throws PoleError near poles and StructuralError for unbound parameters.
std::vector<cplx> bind_symbols(const RingPtr& ring, const MappingBackend& backend, const VecC& u,
                               const VecC& v, const AlphaMatrix* alpha = nullptr);

struct ResidualReport {
  std::string relation;
  int samples = 0;
  int skipped = 0;
  double max = 0, mean = 0, p95 = 0;
  double tol = 0;
  bool pass = false;
  std::string failure;  // nonempty when sampling itself failed
};

/// Evaluator returning (value, scale) at a draw; scaled residual is
/// |value| / max(1, scale).  Return nullopt to skip the draw.
using PointResidual = std::function<std::optional<std::pair<cplx, double>>(const Draw&)>;

ResidualReport residual_check(const std::string& id, const PointResidual& f, BackendPtr backend,
                              const SamplingOptions& opts);

/// Residual of a polynomial relation under the standard symbol binding.
ResidualReport residual_check(const std::string& id, const MPoly& relation, BackendPtr backend,
                              const SamplingOptions& opts, const AlphaMatrix* alpha = nullptr);

/// Largest |p| over the scale of its terms at a single draw.
double scaled_residual(const MPoly& p, const std::vector<cplx>& values);

}  // namespace aat

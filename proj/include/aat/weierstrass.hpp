#pragma once

#include <array>
#include <complex>
#include <vector>

namespace aat {

using cplx = std::complex<double>;

/// Period lattice of the Weierstrass functions with invariants g2, g3.
///
/// omega1, omega2 are half-periods with Im(omega2/omega1) > 0, reduced so
/// that 2*omega1 is a shortest period; e[i] = wp(omega_{i+1}) with
/// omega3 = omega1 + omega2, and eta_i = zeta(omega_i).
struct Lattice {
  cplx g2, g3;
  cplx omega1, omega2;
  cplx eta1, eta2;
  std::array<cplx, 3> e;
  /// c_k of wp(z) = 1/z^2 + sum c_k z^(2k-2), index k.
  std::vector<cplx> laurent;
};

/// Throws DomainError when g2^3 - 27 g3^2 vanishes (degenerate lattice).
Lattice make_lattice(cplx g2, cplx g3);

/// Roots of 4t^3 - g2 t - g3, Newton-polished.
std::array<cplx, 3> cubic_roots(cplx g2, cplx g3);

/// Complex arithmetic-geometric mean with the optimal sign choice at every step.
cplx agm(cplx a, cplx b);

struct WeierstrassValues {
  cplx wp, wp_prime, zeta, sigma;
};

/// wp, wp', zeta and sigma at u.  Argument reduction to the fundamental cell,
/// then Laurent series on a halved argument and duplication back.  Throws
/// PoleError when u is within 1e-12 of a lattice point (sigma is still
/// returned by `weierstrass_sigma`).
WeierstrassValues weierstrass_all(const Lattice& lat, cplx u);

cplx weierstrass_p(const Lattice& lat, cplx u);
cplx weierstrass_p_prime(const Lattice& lat, cplx u);
cplx weierstrass_zeta(const Lattice& lat, cplx u);
cplx weierstrass_sigma(const Lattice& lat, cplx u);

/// Distance from u to the nearest lattice point.
double lattice_distance(const Lattice& lat, cplx u);

/// Nearest lattice point 2m*omega1 + 2n*omega2 as (m, n).
std::array<long, 2> nearest_lattice_point(const Lattice& lat, cplx u);

}  // namespace aat

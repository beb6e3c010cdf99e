#include "aat/weierstrass.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "aat/errors.hpp"
#include "aat/numerics.hpp"

namespace aat {

namespace {

constexpr int kSeriesTerms = 48;

// Laurent coefficients: wp(z) = 1/z^2 + sum_{k>=2} c_k z^(2k-2).
std::vector<cplx> laurent_coefficients(cplx g2, cplx g3) {
  std::vector<cplx> c(kSeriesTerms + 1, 0.0);
  c[2] = g2 / 20.0;
  c[3] = g3 / 28.0;
  for (int k = 4; k <= kSeriesTerms; ++k) {
    cplx s = 0.0;
    for (int m = 2; m <= k - 2; ++m) s += c[m] * c[k - m];
    c[k] = 3.0 / double((2 * k + 1) * (k - 3)) * s;
  }
  return c;
}

// Series evaluation for |w| well inside the radius of convergence. Odd-index
// coefficients vanish when g3 = 0, so every term is summed instead of
// stopping at the first small one.
WeierstrassValues series(const std::vector<cplx>& c, cplx w) {
  cplx w2 = w * w;
  cplx wp = 1.0 / w2, wpp = -2.0 / (w2 * w), zeta = 1.0 / w, logs = 0.0;
  cplx pw = 1.0;  // w^(2k-4)
  for (int k = 2; k <= kSeriesTerms; ++k) {
    cplx t = c[k] * pw * w2;  // c_k w^(2k-2)
    wp += t;
    wpp += double(2 * k - 2) * c[k] * pw * w;
    zeta -= t * w / double(2 * k - 1);
    logs -= t * w2 / double((2 * k - 1) * (2 * k));
    pw *= w2;
  }
  return {wp, wpp, zeta, w * std::exp(logs)};
}

// Halving then duplication; valid at any non-lattice w, accurate when |w| is
// at most a few half-periods.
WeierstrassValues unreduced(const std::vector<cplx>& c, cplx g2, double radius, cplx w) {
  int halvings = 0;
  double target = 0.25 * radius;
  cplx s = w;
  while (std::abs(s) > target && halvings < 60) {
    s *= 0.5;
    ++halvings;
  }
  WeierstrassValues v = series(c, s);
  for (int i = 0; i < halvings; ++i) {
    cplx wpp2 = 6.0 * v.wp * v.wp - g2 / 2.0;  // wp''
    cplx m = wpp2 / v.wp_prime;
    cplx wp_new = m * m / 4.0 - 2.0 * v.wp;
    cplx wpp_new = -v.wp_prime - m * (wp_new - v.wp);
    cplx zeta_new = 2.0 * v.zeta + wpp2 / (2.0 * v.wp_prime);
    cplx s2 = v.sigma * v.sigma;
    cplx sigma_new = -v.wp_prime * s2 * s2;
    v = {wp_new, wpp_new, zeta_new, sigma_new};
  }
  return v;
}

struct Reduced {
  cplx z;
  long m, n;
};

Reduced reduce(const Lattice& lat, cplx u) {
  auto mn = nearest_lattice_point(lat, u);
  cplx omega = 2.0 * double(mn[0]) * lat.omega1 + 2.0 * double(mn[1]) * lat.omega2;
  return {u - omega, mn[0], mn[1]};
}

WeierstrassValues evaluate_all(const Lattice& lat, cplx u, bool allow_pole) {
  Reduced r = reduce(lat, u);
  if (std::abs(r.z) < 1e-12 && !allow_pole) throw PoleError("Weierstrass function at a lattice point");
  WeierstrassValues v;
  if (std::abs(r.z) < 1e-300) {
    v = {cplx(INFINITY), cplx(INFINITY), cplx(INFINITY), 0.0};
  } else {
    v = unreduced(lat.laurent, lat.g2, 2.0 * std::abs(lat.omega1), r.z);
  }
  if (r.m == 0 && r.n == 0) return v;
  cplx H = 2.0 * double(r.m) * lat.eta1 + 2.0 * double(r.n) * lat.eta2;
  cplx Omega = u - r.z;
  v.zeta += H;
  double sign = ((r.m + r.n + r.m * r.n) % 2 == 0) ? 1.0 : -1.0;
  v.sigma *= sign * std::exp(H * (r.z + Omega / 2.0));
  return v;
}

}  // namespace

std::array<cplx, 3> cubic_roots(cplx g2, cplx g3) {
  auto r = polynomial_roots({-g3, -g2, 0.0, 4.0});
  return {r[0], r[1], r[2]};
}

cplx agm(cplx a, cplx b) {
  for (int it = 0; it < 100; ++it) {
    if (std::abs(a - b) <= 1e-16 * std::abs(a)) break;
    cplx a1 = (a + b) / 2.0;
    cplx b1 = std::sqrt(a * b);
    if (std::abs(a1 - b1) > std::abs(a1 + b1)) b1 = -b1;
    a = a1;
    b = b1;
  }
  return a;
}

std::array<long, 2> nearest_lattice_point(const Lattice& lat, cplx u) {
  cplx a = 2.0 * lat.omega1, b = 2.0 * lat.omega2;
  double det = a.real() * b.imag() - a.imag() * b.real();
  double s = (u.real() * b.imag() - u.imag() * b.real()) / det;
  double t = (a.real() * u.imag() - a.imag() * u.real()) / det;
  long m0 = std::lround(s), n0 = std::lround(t);
  std::array<long, 2> best{m0, n0};
  double bestd = INFINITY;
  for (long dm = -1; dm <= 1; ++dm)
    for (long dn = -1; dn <= 1; ++dn) {
      double d = std::abs(u - double(m0 + dm) * a - double(n0 + dn) * b);
      if (d < bestd - 1e-15) {
        bestd = d;
        best = {m0 + dm, n0 + dn};
      }
    }
  return best;
}

double lattice_distance(const Lattice& lat, cplx u) { return std::abs(reduce(lat, u).z); }

Lattice make_lattice(cplx g2, cplx g3) {
  cplx disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  double scale = std::max({std::abs(g2 * g2 * g2), std::abs(27.0 * g3 * g3), 1e-300});
  if (std::abs(disc) <= 1e-12 * scale) throw DomainError("degenerate lattice: g2^3 - 27 g3^2 = 0");
  auto e = cubic_roots(g2, g3);
  cplx a = std::sqrt(e[0] - e[2]);
  cplx b = std::sqrt(e[0] - e[1]);
  cplx c = std::sqrt(e[1] - e[2]);
  if (std::abs(a - b) > std::abs(a + b)) b = -b;
  if (std::abs(a - c) > std::abs(a + c)) c = -c;
  const double pi = std::numbers::pi;
  cplx w1 = pi / agm(a, b);
  cplx w2 = cplx(0.0, pi) / agm(a, c);

  // Gauss reduction of the period basis.
  for (int it = 0; it < 100; ++it) {
    if (std::abs(w2) < std::abs(w1)) std::swap(w1, w2);
    double k = std::round((w2 / w1).real());
    if (k == 0.0) break;
    w2 -= k * w1;
  }
  // Among shortest vectors pick the one with largest real part (then imaginary).
  std::vector<cplx> shortest{w1, -w1};
  double len = std::abs(w1);
  for (cplx cand : {w2, -w2, w2 - w1, w1 - w2, w2 + w1, -w1 - w2})
    if (std::abs(std::abs(cand) - len) <= 1e-9 * len) shortest.push_back(cand);
  cplx best = shortest[0];
  for (cplx s : shortest) {
    if (s.real() > best.real() + 1e-12 * len ||
        (std::abs(s.real() - best.real()) <= 1e-12 * len && s.imag() > best.imag()))
      best = s;
  }
  // Second basis vector: the reduced partner of w1 or w2 with positive orientation.
  cplx other = (std::abs(best - w1) < 1e-9 * len || std::abs(best + w1) < 1e-9 * len) ? w2 : w1;
  if (std::abs(other - best) < 1e-9 * len || std::abs(other + best) < 1e-9 * len) other = w2;
  other -= std::round((other / best).real()) * best;
  if ((other / best).imag() < 0) other = -other;

  Lattice lat;
  lat.g2 = g2;
  lat.g3 = g3;
  lat.omega1 = best / 2.0;
  lat.omega2 = other / 2.0;
  lat.laurent = laurent_coefficients(g2, g3);
  const auto& coeffs = lat.laurent;
  double radius = std::abs(best);
  auto v1 = unreduced(coeffs, g2, radius, lat.omega1);
  auto v2 = unreduced(coeffs, g2, radius, lat.omega2);
  auto v3 = unreduced(coeffs, g2, radius, lat.omega1 + lat.omega2);
  lat.eta1 = v1.zeta;
  lat.eta2 = v2.zeta;
  lat.e = {v1.wp, v2.wp, v3.wp};
  return lat;
}

WeierstrassValues weierstrass_all(const Lattice& lat, cplx u) { return evaluate_all(lat, u, false); }

cplx weierstrass_p(const Lattice& lat, cplx u) { return evaluate_all(lat, u, false).wp; }
cplx weierstrass_p_prime(const Lattice& lat, cplx u) { return evaluate_all(lat, u, false).wp_prime; }
cplx weierstrass_zeta(const Lattice& lat, cplx u) { return evaluate_all(lat, u, false).zeta; }
cplx weierstrass_sigma(const Lattice& lat, cplx u) { return evaluate_all(lat, u, true).sigma; }

}  // namespace aat

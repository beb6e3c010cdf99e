#include <doctest.h>

#include <algorithm>
#include <random>

#include "aat/errors.hpp"
#include "aat/numerics.hpp"
#include "aat/weierstrass.hpp"

using namespace aat;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

bool is_root(const Lattice& lat, cplx t) {
  auto r = cubic_roots(lat.g2, lat.g3);
  return std::any_of(r.begin(), r.end(), [&](cplx x) { return std::abs(x - t) < 1e-10; });
}

}  // namespace

TEST_CASE("lemniscatic lattice half-period values") {
  Lattice lat = make_lattice(4.0, 0.0);
  CHECK(std::abs(2.0 * lat.omega1 - 2.62205755429211981) < 1e-12);
  CHECK(close(weierstrass_p(lat, lat.omega1), 1.0, 1e-10));
  CHECK(close(lat.e[0], 1.0, 1e-10));
  CHECK(close(lat.e[1], -1.0, 1e-10));
  CHECK(std::abs(lat.e[2]) < 1e-10);
  CHECK(std::abs(weierstrass_p_prime(lat, lat.omega1)) < 1e-9);
  CHECK((lat.omega2 / lat.omega1).imag() > 0);
}

TEST_CASE("half-periods map to the three distinct cubic roots") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int it = 0; it < 20; ++it) {
    cplx g2(U(rng), it % 2 ? U(rng) : 0.0), g3(U(rng), it % 3 ? U(rng) : 0.0);
    Lattice lat = make_lattice(g2, g3);
    CHECK((lat.omega2 / lat.omega1).imag() > 0);
    for (auto e : lat.e) CHECK(is_root(lat, e));
    CHECK(std::abs(lat.e[0] - lat.e[1]) > 1e-6);
    CHECK(std::abs(lat.e[0] - lat.e[2]) > 1e-6);
    CHECK(std::abs(lat.e[1] - lat.e[2]) > 1e-6);
  }
}

TEST_CASE("wp is even and satisfies its differential equation") {
  Lattice lat = make_lattice(4.0, 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  for (int it = 0; it < 100; ++it) {
    cplx u(U(rng), U(rng));
    if (lattice_distance(lat, u) < 0.05) continue;
    auto v = weierstrass_all(lat, u);
    CHECK(close(weierstrass_p(lat, -u), v.wp, 1e-10));
    cplx res = v.wp_prime * v.wp_prime - 4.0 * v.wp * v.wp * v.wp + lat.g2 * v.wp + lat.g3;
    double scale = std::max({1.0, std::norm(v.wp_prime), 4.0 * std::pow(std::abs(v.wp), 3)});
    CHECK(std::abs(res) < 1e-9 * scale);
  }
}

TEST_CASE("zeta and sigma quasi-periodicity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.2, 1.2);
  for (auto [g2, g3] : {std::pair<cplx, cplx>{4.0, 0.0}, {1.0, 2.0}, {cplx(2, 1), cplx(-1, 0.5)}}) {
    Lattice lat = make_lattice(g2, g3);
    for (int it = 0; it < 20; ++it) {
      cplx u(U(rng), U(rng));
      if (lattice_distance(lat, u) < 0.05) continue;
      for (int i = 0; i < 2; ++i) {
        cplx w = i == 0 ? lat.omega1 : lat.omega2;
        cplx eta = i == 0 ? lat.eta1 : lat.eta2;
        CHECK(std::abs(weierstrass_zeta(lat, u + 2.0 * w) - weierstrass_zeta(lat, u) - 2.0 * eta) < 1e-9);
        cplx lhs = weierstrass_sigma(lat, u + 2.0 * w);
        cplx rhs = -weierstrass_sigma(lat, u) * std::exp(2.0 * eta * (u + w));
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
      }
    }
  }
}

TEST_CASE("zeta and sigma agree with derivatives of each other") {
  Lattice lat = make_lattice(1.0, 2.0);
  const double h = 1e-5;
  for (cplx u : {cplx(0.3, 0.2), cplx(-0.7, 0.9), cplx(1.1, -0.4)}) {
    cplx dzeta = (weierstrass_zeta(lat, u + h) - weierstrass_zeta(lat, u - h)) / (2 * h);
    CHECK(close(-dzeta, weierstrass_p(lat, u), 1e-7));
    cplx ls = (std::log(weierstrass_sigma(lat, u + h)) - std::log(weierstrass_sigma(lat, u - h))) / (2 * h);
    CHECK(close(ls, weierstrass_zeta(lat, u), 1e-7));
    cplx dwp = (weierstrass_p(lat, u + h) - weierstrass_p(lat, u - h)) / (2 * h);
    CHECK(close(dwp, weierstrass_p_prime(lat, u), 1e-7));
  }
}

TEST_CASE("lattice errors") {
  CHECK_THROWS_AS(make_lattice(3.0, 1.0), DomainError);  // 27 - 27 = 0
  Lattice lat = make_lattice(4.0, 0.0);
  CHECK_THROWS_AS(weierstrass_p(lat, 2.0 * lat.omega1), PoleError);
}

TEST_CASE("continued fraction reconstruction") {
  CHECK(*reconstruct_rational(0.75) == make_rat(3, 4));
  CHECK(*reconstruct_rational(-22.0 / 7.0) == make_rat(-22, 7));
  CHECK(*reconstruct_rational(4.0) == Rat(4));
  CHECK_FALSE(reconstruct_rational(3.14159265358979, 1000).has_value());
  auto roots = polynomial_roots({-6.0, 11.0, -6.0, 1.0});
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  CHECK(std::abs(roots[0] - 1.0) < 1e-12);
  CHECK(std::abs(roots[2] - 3.0) < 1e-12);
}

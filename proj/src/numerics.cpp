#include "aat/numerics.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "aat/errors.hpp"

namespace aat {

std::vector<std::complex<double>> polynomial_roots(const std::vector<std::complex<double>>& c_in) {
  std::vector<std::complex<double>> c = c_in;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() < 2) return {};
  const int d = int(c.size()) - 1;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<std::complex<double>> roots(es.eigenvalues().data(), es.eigenvalues().data() + d);
  for (auto& r : roots) {
    for (int it = 0; it < 4; ++it) {
      std::complex<double> f = c[d], df = 0.0;
      for (int k = d - 1; k >= 0; --k) {
        df = df * r + f;
        f = f * r + c[k];
      }
      if (df == 0.0) break;
      std::complex<double> step = f / df;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
      if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(r))) break;
    }
  }
  return roots;
}

std::optional<Rat> reconstruct_rational(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents p/q of the continued fraction of x.
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  std::optional<Rat> best;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(rest);
    if (std::abs(a) > 1e15) break;
    Integer ai(a);
    Integer p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    Rat conv = make_rat(p2, q2);
    if (std::abs(conv.get_d() - x) <= tol * std::max(1.0, std::abs(x))) {
      best = conv;
      break;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = rest - a;
    if (frac == 0.0) break;
    rest = 1.0 / frac;
  }
  return best;
}

}  // namespace aat

#pragma once

#include <random>
#include <string>
#include <vector>

#include "aat/mpoly.hpp"
#include "aat/parse.hpp"

namespace testsupport {

using aat::MPoly;
using aat::Rat;

inline MPoly P(const aat::RingPtr& r, const std::string& s) { return aat::parse_poly(s, r); }

/// Sylvester matrix determinant by fraction-free Bareiss elimination.
/// Independent of the subresultant code path; used as a resultant oracle.
inline MPoly sylvester_resultant(const MPoly& a, const MPoly& b, std::size_t v) {
  auto ca = aat::coefficients_in(a, v);
  auto cb = aat::coefficients_in(b, v);
  int m = int(ca.size()) - 1, n = int(cb.size()) - 1;
  int N = m + n;
  const auto& ring = a.ring();
  std::vector<std::vector<MPoly>> M(N, std::vector<MPoly>(N, MPoly(ring)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) M[r][r + k] = ca[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) M[n + r][r + k] = cb[n - k];
  MPoly prev = MPoly::constant(ring, Rat(1));
  int sign = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (M[k][k].is_zero()) {
      int sw = -1;
      for (int r = k + 1; r < N; ++r)
        if (!M[r][k].is_zero()) {
          sw = r;
          break;
        }
      if (sw < 0) return MPoly(ring);
      std::swap(M[k], M[sw]);
      sign = -sign;
    }
    for (int i = k + 1; i < N; ++i)
      for (int j = k + 1; j < N; ++j)
        M[i][j] = aat::exact_quotient(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev);
    prev = M[k][k];
  }
  MPoly d = M[N - 1][N - 1];
  return sign < 0 ? -d : d;
}

/// Random polynomial with small integer coefficients in the given symbols.
inline MPoly random_poly(std::mt19937_64& rng, const aat::RingPtr& ring,
                         const std::vector<std::size_t>& symbols, int max_total_degree,
                         int max_terms) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> deg(0, max_total_degree);
  std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
  std::vector<aat::Term> terms;
  int count = nterms(rng);
  for (int t = 0; t < count; ++t) {
    aat::Monomial m;
    int d = deg(rng);
    for (int e = 0; e < d; ++e) m.exp[symbols[pick(rng)]]++;
    int c = coeff(rng);
    if (c == 0) c = 1;
    terms.push_back(aat::Term{m, Rat(c)});
  }
  return MPoly::from_terms(ring, std::move(terms));
}

}  // namespace testsupport

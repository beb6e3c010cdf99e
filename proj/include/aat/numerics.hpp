#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "aat/rat.hpp"

namespace aat {

/// Roots of sum c[k] t^k (c.back() != 0) from the companion matrix, each
/// polished by a few Newton steps on the original coefficients.
std::vector<std::complex<double>> polynomial_roots(const std::vector<std::complex<double>>& c);

/// Best rational approximation of x by continued fractions with denominator
/// at most `max_den`; empty when no convergent is within `tol` of x.
std::optional<Rat> reconstruct_rational(double x, long max_den = 1000000, double tol = 1e-9);

}  // namespace aat

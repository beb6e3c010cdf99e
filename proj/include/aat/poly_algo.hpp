#pragma once

#include <optional>
#include <vector>

#include "aat/mpoly.hpp"

namespace aat {

/// gcd of the coefficients of p viewed as a polynomial in `symbol`.
MPoly content_in(const MPoly& p, std::size_t symbol);
MPoly primitive_part_in(const MPoly& p, std::size_t symbol);

/// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, in `symbol`.
MPoly prem(const MPoly& a, const MPoly& b, std::size_t symbol);

/// Greatest common divisor over Q, normalized to leading coefficient 1.
/// gcd(p, 0) is p normalized; gcd(0, 0) is 0.
MPoly gcd(const MPoly& a, const MPoly& b);

/// Resultant with respect to `symbol` by the subresultant algorithm.
/// Throws DomainError when either argument does not involve `symbol`.
MPoly resultant(const MPoly& a, const MPoly& b, std::size_t symbol);
MPoly resultant(const MPoly& a, const MPoly& b, std::string_view symbol);

/// Discriminant-free test: gcd(p, dp/dv) has degree 0 in v.
bool squarefree_check(const MPoly& p, std::size_t symbol);
bool squarefree_check(const MPoly& p, std::string_view symbol);

/// Yun decomposition of the part of p that involves `symbol`:
/// p = content * prod f_i^i, returned as (f_1, f_2, ...) with empty slots as 1.
std::vector<MPoly> squarefree_decomposition(const MPoly& p, std::size_t symbol);
MPoly squarefree_part(const MPoly& p, std::size_t symbol);

/// Exact square root when p is the square of a polynomial.
std::optional<MPoly> poly_sqrt(const MPoly& p);

/// Splits p into candidate factors: the content in `symbol` is dropped, and
/// the primitive part is broken up by squarefree decomposition, by factors
/// common with `hints`, and by linear factors in `symbol` with rational roots.
/// Each returned factor is squarefree, has positive degree in `symbol`, and is
/// normalized by primitive_integer. Order is by ascending degree in `symbol`,
/// then by canonical text.
std::vector<MPoly> candidate_factors(const MPoly& p, std::size_t symbol,
                                     const std::vector<MPoly>& hints = {});

}  // namespace aat

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aat/mpoly.hpp"

namespace aat {

/// Addition-theorem polynomials G_1..G_n for a built-in family, in the
/// standard ring of the problem (parameters stay symbolic where the ring
/// declares them).  Generated by exact elimination:
///   exp           L1 - x1*y1
///   rational      resultants eliminating s, t from L1 - phi(s+t), x1 - phi(s), y1 - phi(t)
///   weierstrass   resultants eliminating x0, y0 from the classical addition
///                 relation 4(L1 + x1 + y1)(x1 - y1)^2 = (x0 - y0)^2 together with
///                 x0^2 = 4x1^3 - g2 x1 - g3 and the same for y0, then the
///                 squarefree primitive part in L1
///   singular2-case1..3  coordinatewise additive / multiplicative laws
///   singular2-case4     the Weierstrass G1 and the eliminated zeta law for G2
/// Throws StructuralError when the family has no generator (singular2-case5,
/// whose law carries the transcendental constant sigma(a)).
std::vector<MPoly> generate_aat(const std::string& family, const RingPtr& ring,
                                const std::map<std::string, Rat>& params,
                                const std::optional<MPoly>& phi = std::nullopt);

bool has_generator(const std::string& family);

}  // namespace aat

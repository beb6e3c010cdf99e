#pragma once

#include <string_view>

#include "aat/mpoly.hpp"

namespace aat {

/// Parses a polynomial expression over `ring`.
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary ('*' unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' INT)?
///   atom   := NUMBER | IDENT | '(' expr ')'
///   NUMBER := INT ('/' INT)?
///
/// Errors carry the 1-based line and column; `line` and `first_column` let
/// callers report positions inside a larger file.
MPoly parse_poly(std::string_view text, const RingPtr& ring, std::size_t line = 1,
                 std::size_t first_column = 1);

}  // namespace aat

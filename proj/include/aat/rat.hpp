#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace aat {

using Integer = mpz_class;

// GMP keeps mpq values canonical (reduced, positive denominator) after every
// arithmetic operation; only raw construction needs an explicit canonicalize().
using Rat = mpq_class;

Rat make_rat(const Integer& num, const Integer& den);
Rat make_rat(long num, long den = 1);

std::string to_string(const Rat& r);
std::string to_string(const Integer& z);

/// Exact square root of a nonnegative rational, if it is a perfect square.
std::optional<Rat> exact_sqrt(const Rat& r);

inline double to_double(const Rat& r) { return r.get_d(); }

}  // namespace aat

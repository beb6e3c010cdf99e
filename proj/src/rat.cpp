#include "aat/rat.hpp"

#include "aat/errors.hpp"

namespace aat {

Rat make_rat(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat make_rat(long num, long den) { return make_rat(Integer(num), Integer(den)); }

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::optional<Rat> exact_sqrt(const Rat& r) {
  if (r < 0) return std::nullopt;
  if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t()))
    return std::nullopt;
  Integer n = sqrt(r.get_num());
  Integer d = sqrt(r.get_den());
  return make_rat(n, d);
}

}  // namespace aat

#pragma once

// Arbitrary-precision rationals for the exact oracles. Common denominators of
// ψ- and φ(v)/v-sums outgrow any fixed width after a few hundred terms.

#include <gmpxx.h>

#include <cstdint>

#include "phifloor/exact_psi.hpp"

namespace phifloor {

using BigRational = mpq_class;

inline mpz_class to_mpz(std::int64_t v) {
  static_assert(sizeof(long) == 8, "LP64 expected");
  return mpz_class(static_cast<long>(v));
}

inline mpz_class to_mpz(std::uint64_t v) {
  static_assert(sizeof(unsigned long) == 8, "LP64 expected");
  return mpz_class(static_cast<unsigned long>(v));
}

inline BigRational to_big(const Rational& r) {
  BigRational q(to_mpz(r.num()), to_mpz(r.den()));
  q.canonicalize();
  return q;
}

inline BigRational big_fraction(std::int64_t num, std::int64_t den) {
  BigRational q(to_mpz(num), to_mpz(den));
  q.canonicalize();
  return q;
}

}  // namespace phifloor

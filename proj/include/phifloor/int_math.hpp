#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "phifloor/errors.hpp"

namespace phifloor {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// floor(sqrt(n)), exact for every 64-bit n.
inline u64 isqrt(u64 n) {
  if (n < 2) return n;
  u64 r = static_cast<u64>(__builtin_sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// floor(cbrt(n)).
inline u64 icbrt(u64 n) {
  u64 r = static_cast<u64>(__builtin_cbrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline u64 narrow_u64(u128 v, const char* what) {
  if (v > std::numeric_limits<u64>::max()) {
    throw ArithmeticError(std::string(what) + ": result exceeds 64 bits");
  }
  return static_cast<u64>(v);
}

inline i64 narrow_i64(i128 v, const char* what) {
  if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min()) {
    throw ArithmeticError(std::string(what) + ": result exceeds signed 64 bits");
  }
  return static_cast<i64>(v);
}

inline u128 checked_add(u128 a, u128 b, const char* what) {
  u128 r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticError(std::string(what) + ": 128-bit overflow");
  return r;
}

inline u128 checked_mul(u128 a, u128 b, const char* what) {
  u128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError(std::string(what) + ": 128-bit overflow");
  return r;
}

std::string to_string(u128 v);

}  // namespace phifloor

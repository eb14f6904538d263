#pragma once

// Test-only reference implementations. Deliberately naive and independent of
// the library code paths they check.

#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

inline std::uint64_t totient_by_gcd(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t m = 1; m <= n; ++m) c += std::gcd(m, n) == 1;
  return c;
}

inline std::uint64_t divisor_count_by_scan(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) c += (d * d == n) ? 1 : 2;
  }
  return c;
}

inline int moebius_by_trial(std::uint64_t n) {
  int r = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    r = -r;
  }
  return n > 1 ? -r : r;
}

/// τ(1..x) by the divisor-multiples sieve.
inline std::vector<std::uint64_t> divisor_counts(std::uint64_t x) {
  std::vector<std::uint64_t> t(x + 1, 0);
  for (std::uint64_t d = 1; d <= x; ++d)
    for (std::uint64_t m = d; m <= x; m += d) ++t[m];
  return t;
}

/// φ(1..x) from Σ_{d|n} φ(d) = n, by Möbius-free subtraction.
inline std::vector<std::int64_t> totients_by_subtraction(std::uint64_t x) {
  std::vector<std::int64_t> phi(x + 1, 0);
  for (std::uint64_t n = 1; n <= x; ++n) phi[n] = static_cast<std::int64_t>(n);
  for (std::uint64_t d = 1; d <= x; ++d)
    for (std::uint64_t m = 2 * d; m <= x; m += d) phi[m] -= phi[d];
  return phi;
}

}  // namespace oracle

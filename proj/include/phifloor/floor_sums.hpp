#pragma once

// The totient floor sums
//     S(x)  = Σ_{n<=x} φ(⌊x/n⌋)
//     S*(x) = Σ_{n<=x} φ(⌊x/n⌋)/⌊x/n⌋
// and the divisor sum D(x) = Σ_{n<=x} τ(n) with its discrepancy Δ(x).

#include <cstddef>
#include <optional>
#include <vector>

#include "phifloor/arith_tables.hpp"
#include "phifloor/big_rational.hpp"
#include "phifloor/exact_psi.hpp"

namespace phifloor {

/// Maximal run n_lo..n_hi on which ⌊x/n⌋ == value.
struct FloorBlock {
  u64 value;
  u64 n_lo;
  u64 n_hi;

  u64 count() const { return n_hi - n_lo + 1; }
  friend bool operator==(const FloorBlock&, const FloorBlock&) = default;
};

/// Calls fn(FloorBlock) for every block of x in increasing n.
template <class Fn>
void for_each_floor_block(u64 x, Fn&& fn) {
  for (u64 n = 1; n <= x;) {
    const u64 v = x / n;
    const u64 n_hi = x / v;
    fn(FloorBlock{v, n, n_hi});
    n = n_hi + 1;
  }
}

/// Blocks of x in increasing n (so strictly decreasing value); at most 2⌈√x⌉.
std::vector<FloorBlock> floor_blocks(u64 x);

enum class SumMethod {
  automatic,  ///< blocks below kStreamingThreshold, streaming at and above
  blocks,     ///< O(√x) blocks, φ at large values by factorization
  streaming,  ///< Σ_d φ(d)(⌊x/d⌋ - ⌊x/(d+1)⌋) against a segmented sieve
};

inline constexpr u64 kStreamingThreshold = 10'000'000;
inline constexpr u64 kExactRationalCap = 2'000;
inline constexpr u64 kBruteIntegerCap = 1'000'000;

struct SumResult {
  u64 x{0};
  AccurateSum real;
  std::optional<BigRational> exact;  // populated for x <= exact cap
  u64 term_count{0};

  double value() const { return real.value(); }
  double error_bound() const { return real.error_bound(); }
};

/// S(x), exact. Throws ArithmeticError if it exceeds 64 bits.
u64 sum_phi_floor(u64 x, SumMethod method = SumMethod::automatic,
                  std::size_t memory_budget = kDefaultMemoryBudget);

/// S*(x) through the compensated accumulator, one rational term count·φ(v)/v
/// per block; also exact for x <= exact_cap.
SumResult sum_phi_over_floor(u64 x, SumMethod method = SumMethod::automatic,
                             std::size_t memory_budget = kDefaultMemoryBudget,
                             u64 exact_cap = kExactRationalCap);

/// S*(x) by blocks with φ taken from a table covering [1, x].
AccurateSum sum_phi_over_floor_with_table(u64 x, const SieveTable& totients);

namespace serial {
u64 sum_phi_floor_streaming(u64 x, std::size_t memory_budget = kDefaultMemoryBudget);
AccurateSum sum_phi_over_floor_streaming(u64 x, std::size_t memory_budget = kDefaultMemoryBudget);
u64 sum_phi_floor_blocks(u64 x);
}  // namespace serial

// -- brute-force oracles -------------------------------------------------------
// Direct n = 1..x loops over a flat totient table from a plain Eratosthenes
// pass, independent of the segmented sieve and block code above.

u64 brute_sum_phi_floor(u64 x, u64 cap = kBruteIntegerCap);
BigRational brute_sum_phi_over_floor(u64 x, u64 cap = kExactRationalCap);

// -- divisor problem --------------------------------------------------------

/// D(x) by the hyperbola method 2Σ_{n<=√x}⌊x/n⌋ - ⌊√x⌋².
u64 divisor_sum(u64 x);

/// Δ(x) = D(x) - x(ln x + 2γ - 1).
double divisor_delta(u64 x);

}  // namespace phifloor

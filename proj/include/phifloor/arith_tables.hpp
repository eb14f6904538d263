#pragma once

// Exact tables of φ, μ and τ over integer ranges, single-integer
// factorization, and the totient summatory function Φ(x).
//
// Everything here is integer arithmetic. Sieving is segmented: the segment
// length is derived from the memory budget alone, so the segment layout (and
// every result built from it) is independent of the OpenMP thread count.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "phifloor/int_math.hpp"
#include "phifloor/parallel.hpp"

namespace phifloor {

enum class FunctionKind : std::uint8_t { totient = 0, moebius = 1, divisor_count = 2 };

const char* to_string(FunctionKind kind);

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{16} << 20;

/// Bytes of working storage one sieved integer costs (value + cofactor).
inline constexpr std::size_t kSieveBytesPerEntry = 2 * sizeof(u64);

struct SieveTable {
  FunctionKind kind{FunctionKind::totient};
  u64 lo{1};
  u64 hi{1};
  std::vector<i64> values;

  std::size_t size() const { return values.size(); }
  i64 operator[](u64 n) const { return values[n - lo]; }
  bool contains(u64 n) const { return n >= lo && n <= hi; }
};

/// Read-only view of one sieved segment handed to streaming consumers.
struct SegmentView {
  u64 lo;
  u64 hi;
  std::span<const i64> values;

  i64 operator[](u64 n) const { return values[n - lo]; }
};

/// Primes p <= limit, plain sieve of Eratosthenes.
std::vector<std::uint32_t> primes_up_to(u64 limit);

/// Fixed partition of [lo, hi] into segments of equal length (last one short).
struct SegmentPlan {
  u64 lo{1};
  u64 hi{1};
  u64 segment_len{1};

  std::size_t count() const { return static_cast<std::size_t>((hi - lo) / segment_len + 1); }
  std::pair<u64, u64> segment(std::size_t i) const {
    const u64 s = lo + static_cast<u64>(i) * segment_len;
    const u64 e = (hi - s < segment_len - 1) ? hi : s + segment_len - 1;
    return {s, e};
  }
};

/// Throws ResourceError if the budget cannot hold the base primes up to
/// sqrt(hi) plus at least one sieve entry.
SegmentPlan plan_segments(u64 lo, u64 hi, std::size_t memory_budget);

/// Sieves [lo, hi] into `out` using base primes covering sqrt(hi).
/// `cofactor` is scratch of the same length.
void sieve_segment(FunctionKind kind, u64 lo, u64 hi, std::span<const std::uint32_t> base_primes,
                   std::span<i64> out, std::span<u64> cofactor);

/// Segmented sieve of [lo, hi]; segments are filled in parallel.
SieveTable sieve_range(FunctionKind kind, u64 lo, u64 hi,
                       std::size_t memory_budget = kDefaultMemoryBudget);

namespace serial {
/// Unsegmented reference sieve (one flat block, no OpenMP).
SieveTable sieve_range_single_block(FunctionKind kind, u64 lo, u64 hi);
}  // namespace serial

/// Sieves [lo, hi] segment by segment and calls `fn(SegmentView)` for each,
/// in parallel. Returns the per-segment results in ascending segment order.
/// Buffers are per thread, so peak memory is threads * segment budget.
template <class Partial, class Fn>
std::vector<Partial> map_segments(FunctionKind kind, u64 lo, u64 hi, std::size_t memory_budget,
                                  Fn&& fn) {
  const SegmentPlan plan = plan_segments(lo, hi, memory_budget);
  const auto base = primes_up_to(isqrt(hi));
  const std::size_t count = plan.count();
  std::vector<Partial> partials(count);
  ParallelErrors errors;
#pragma omp parallel
  {
    std::vector<i64> values(plan.segment_len);
    std::vector<u64> cofactor(plan.segment_len);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t i = 0; i < count; ++i) {
      errors.guard(i, [&] {
        const auto [s, e] = plan.segment(i);
        const auto len = static_cast<std::size_t>(e - s + 1);
        std::span<i64> out(values.data(), len);
        sieve_segment(kind, s, e, base, out, std::span<u64>(cofactor.data(), len));
        partials[i] = fn(SegmentView{s, e, std::span<const i64>(out)});
      });
    }
  }
  errors.rethrow();
  return partials;
}

/// Serial counterpart of map_segments: same segmentation, one thread.
template <class Fn>
void for_each_segment(FunctionKind kind, u64 lo, u64 hi, std::size_t memory_budget, Fn&& fn) {
  const SegmentPlan plan = plan_segments(lo, hi, memory_budget);
  const auto base = primes_up_to(isqrt(hi));
  std::vector<i64> values(plan.segment_len);
  std::vector<u64> cofactor(plan.segment_len);
  for (std::size_t i = 0; i < plan.count(); ++i) {
    const auto [s, e] = plan.segment(i);
    const auto len = static_cast<std::size_t>(e - s + 1);
    std::span<i64> out(values.data(), len);
    sieve_segment(kind, s, e, base, out, std::span<u64>(cofactor.data(), len));
    fn(SegmentView{s, e, std::span<const i64>(out)});
  }
}

// -- factorization ----------------------------------------------------------

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  u64 n{1};
  std::vector<PrimePower> factors;  // increasing primes
};

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(u64 n);

/// Trial division by primes below 10^6, then Pollard rho on what remains.
Factorization factorize(u64 n);

u64 totient_of(const Factorization& f);
int moebius_of(const Factorization& f);
u64 divisor_count_of(const Factorization& f);

inline u64 totient(u64 n) { return totient_of(factorize(n)); }

// -- summatory totient ------------------------------------------------------

/// Φ(x) = Σ_{n<=x} φ(n) via Φ(x) = x(x+1)/2 - Σ_{m>=2} Φ(⌊x/m⌋), memoized
/// over the ⌊x/m⌋ values, sieving directly below ~x^{2/3}.
/// Throws ArithmeticError if Φ(x) does not fit in 64 bits.
u64 totient_summatory(u64 x, std::size_t memory_budget = kDefaultMemoryBudget);

// -- on-disk cache ----------------------------------------------------------

/// Layout: three little-endian u64 header words (kind, lo, hi) followed by
/// hi-lo+1 little-endian two's-complement 64-bit values.
void write_sieve_cache(const std::filesystem::path& path, const SieveTable& table);
SieveTable read_sieve_cache(const std::filesystem::path& path);

}  // namespace phifloor

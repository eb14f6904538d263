#include "phifloor/floor_sums.hpp"

#include <cmath>
#include <string>

#include "phifloor/constants.hpp"
#include "phifloor/parallel.hpp"

namespace phifloor {

namespace {

void require_positive(u64 x, const char* what) {
  if (x == 0) throw DomainError(std::string(what) + ": x must be >= 1");
}

SumMethod resolve(SumMethod m, u64 x) {
  if (m != SumMethod::automatic) return m;
  return x >= kStreamingThreshold ? SumMethod::streaming : SumMethod::blocks;
}

// φ(v) for every block value: a sieve covers v <= √x, factorization the rest.
std::vector<u64> block_totients(const std::vector<FloorBlock>& blocks, u64 x, std::size_t budget,
                                bool parallel) {
  const u64 root = isqrt(x);
  const SieveTable small = sieve_range(FunctionKind::totient, 1, std::max<u64>(root, 1), budget);
  std::vector<u64> phi(blocks.size());
  const auto count = static_cast<std::ptrdiff_t>(blocks.size());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i);
    errors.guard(j, [&] {
      const u64 v = blocks[j].value;
      phi[j] = v <= root ? static_cast<u64>(small[v]) : totient(v);
    });
  }
  errors.rethrow();
  return phi;
}

u64 sum_phi_floor_blocks_impl(u64 x, std::size_t budget, bool parallel) {
  const auto blocks = floor_blocks(x);
  const auto phi = block_totients(blocks, x, budget, parallel);
  u128 total = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    total = checked_add(total, checked_mul(blocks[i].count(), phi[i], "sum_phi_floor"), "sum_phi_floor");
  }
  return narrow_u64(total, "sum_phi_floor");
}

u128 streaming_partial(u64 x, const SegmentView& seg) {
  u128 acc = 0;
  for (u64 d = seg.lo; d <= seg.hi; ++d) {
    const u64 count = x / d - x / (d + 1);
    if (count != 0) acc += static_cast<u128>(count) * static_cast<u64>(seg[d]);
  }
  return acc;
}

AccurateSum streaming_star_partial(u64 x, const SegmentView& seg) {
  AccurateSum acc;
  for (u64 d = seg.lo; d <= seg.hi; ++d) {
    const u64 count = x / d - x / (d + 1);
    if (count == 0) continue;
    acc.add(Rational::from_wide(static_cast<i128>(count) * seg[d], static_cast<i128>(d)));
  }
  return acc;
}

std::vector<i64> flat_totients(u64 x) {
  std::vector<i64> phi(static_cast<std::size_t>(x) + 1);
  for (u64 n = 0; n <= x; ++n) phi[n] = static_cast<i64>(n);
  for (u64 p = 2; p <= x; ++p) {
    if (phi[p] != static_cast<i64>(p)) continue;  // composite: already reduced
    for (u64 m = p; m <= x; m += p) phi[m] -= phi[m] / static_cast<i64>(p);
  }
  return phi;
}

}  // namespace

std::vector<FloorBlock> floor_blocks(u64 x) {
  require_positive(x, "floor_blocks");
  std::vector<FloorBlock> out;
  out.reserve(static_cast<std::size_t>(2 * isqrt(x) + 2));
  for_each_floor_block(x, [&](const FloorBlock& b) { out.push_back(b); });
  return out;
}

u64 sum_phi_floor(u64 x, SumMethod method, std::size_t memory_budget) {
  require_positive(x, "sum_phi_floor");
  if (resolve(method, x) == SumMethod::blocks) return sum_phi_floor_blocks_impl(x, memory_budget, true);
  const auto partials = map_segments<u128>(FunctionKind::totient, 1, x, memory_budget,
                                           [x](const SegmentView& seg) { return streaming_partial(x, seg); });
  u128 total = 0;
  for (const u128 p : partials) total = checked_add(total, p, "sum_phi_floor");
  return narrow_u64(total, "sum_phi_floor");
}

AccurateSum sum_phi_over_floor_with_table(u64 x, const SieveTable& totients) {
  AccurateSum acc;
  for_each_floor_block(x, [&](const FloorBlock& b) {
    acc.add(Rational::from_wide(static_cast<i128>(b.count()) * totients[b.value], static_cast<i128>(b.value)));
  });
  return acc;
}

SumResult sum_phi_over_floor(u64 x, SumMethod method, std::size_t memory_budget, u64 exact_cap) {
  require_positive(x, "sum_phi_over_floor");
  SumResult result;
  result.x = x;
  std::vector<FloorBlock> blocks;
  std::vector<u64> phi;
  if (resolve(method, x) == SumMethod::blocks || x <= exact_cap) {
    blocks = floor_blocks(x);
    phi = block_totients(blocks, x, memory_budget, true);
  }
  if (resolve(method, x) == SumMethod::blocks) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      result.real.add(Rational::from_wide(static_cast<i128>(blocks[i].count()) * static_cast<i128>(phi[i]),
                                          static_cast<i128>(blocks[i].value)));
    }
    result.term_count = blocks.size();
  } else {
    const auto partials = map_segments<AccurateSum>(
        FunctionKind::totient, 1, x, memory_budget,
        [x](const SegmentView& seg) { return streaming_star_partial(x, seg); });
    for (const auto& p : partials) result.real.merge(p);
    result.term_count = result.real.term_count();
  }
  if (x <= exact_cap) {
    BigRational exact = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      exact += BigRational(to_mpz(blocks[i].count() * phi[i]), to_mpz(blocks[i].value));
    }
    exact.canonicalize();
    result.exact = exact;
  }
  return result;
}

namespace serial {

u64 sum_phi_floor_blocks(u64 x) {
  require_positive(x, "sum_phi_floor");
  return sum_phi_floor_blocks_impl(x, kDefaultMemoryBudget, false);
}

u64 sum_phi_floor_streaming(u64 x, std::size_t memory_budget) {
  require_positive(x, "sum_phi_floor");
  u128 total = 0;
  for_each_segment(FunctionKind::totient, 1, x, memory_budget, [&](const SegmentView& seg) {
    total = checked_add(total, streaming_partial(x, seg), "sum_phi_floor");
  });
  return narrow_u64(total, "sum_phi_floor");
}

AccurateSum sum_phi_over_floor_streaming(u64 x, std::size_t memory_budget) {
  require_positive(x, "sum_phi_over_floor");
  AccurateSum acc;
  for_each_segment(FunctionKind::totient, 1, x, memory_budget, [&](const SegmentView& seg) {
    for (u64 d = seg.lo; d <= seg.hi; ++d) {
      const u64 count = x / d - x / (d + 1);
      if (count != 0) acc.add(Rational::from_wide(static_cast<i128>(count) * seg[d], static_cast<i128>(d)));
    }
  });
  return acc;
}

}  // namespace serial

u64 brute_sum_phi_floor(u64 x, u64 cap) {
  require_positive(x, "brute_sum_phi_floor");
  if (x > cap) throw DomainError("brute_sum_phi_floor: x above oracle cap " + std::to_string(cap));
  const auto phi = flat_totients(x);
  u64 total = 0;
  for (u64 n = 1; n <= x; ++n) total += static_cast<u64>(phi[x / n]);
  return total;
}

BigRational brute_sum_phi_over_floor(u64 x, u64 cap) {
  require_positive(x, "brute_sum_phi_over_floor");
  if (x > cap) throw DomainError("brute_sum_phi_over_floor: x above oracle cap " + std::to_string(cap));
  const auto phi = flat_totients(x);
  BigRational total = 0;
  // Consecutive equal quotients are folded into one exact addition.
  u64 run_value = x;
  i64 run_length = 0;
  for (u64 n = 1; n <= x; ++n) {
    const u64 v = x / n;
    if (v != run_value) {
      total += BigRational(to_mpz(run_length * phi[run_value]), to_mpz(run_value));
      run_value = v;
      run_length = 0;
    }
    ++run_length;
  }
  total += BigRational(to_mpz(run_length * phi[run_value]), to_mpz(run_value));
  total.canonicalize();
  return total;
}

u64 divisor_sum(u64 x) {
  require_positive(x, "divisor_sum");
  const u64 r = isqrt(x);
  u128 s = 0;
  for (u64 n = 1; n <= r; ++n) s += x / n;
  return narrow_u64(2 * s - static_cast<u128>(r) * r, "divisor_sum");
}

double divisor_delta(u64 x) {
  const long double d = static_cast<long double>(divisor_sum(x));
  const long double xl = static_cast<long double>(x);
  return static_cast<double>(d - xl * (std::log(xl) + 2.0L * kEulerGamma - 1.0L));
}

}  // namespace phifloor

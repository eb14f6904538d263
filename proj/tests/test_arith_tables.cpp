#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "phifloor/arith_tables.hpp"

using namespace phifloor;

namespace {

std::vector<i64> as_vec(std::initializer_list<i64> v) { return v; }

}  // namespace

TEST_CASE("sieve_range small examples") {
  CHECK(sieve_range(FunctionKind::totient, 1, 10).values == as_vec({1, 1, 2, 2, 4, 2, 6, 4, 6, 4}));
  CHECK(sieve_range(FunctionKind::moebius, 1, 6).values == as_vec({1, -1, -1, 0, -1, 1}));
  CHECK(sieve_range(FunctionKind::totient, 1, 1).values == as_vec({1}));
  CHECK(sieve_range(FunctionKind::divisor_count, 1, 6).values == as_vec({1, 2, 2, 3, 2, 4}));
}

TEST_CASE("sieve values match naive definitions") {
  const auto phi = sieve_range(FunctionKind::totient, 1, 2000);
  const auto mu = sieve_range(FunctionKind::moebius, 1, 2000);
  const auto tau = sieve_range(FunctionKind::divisor_count, 1, 2000);
  for (u64 n = 1; n <= 2000; ++n) {
    REQUIRE(phi[n] == static_cast<i64>(oracle::totient_by_gcd(n)));
    REQUIRE(mu[n] == oracle::moebius_by_trial(n));
    REQUIRE(tau[n] == static_cast<i64>(oracle::divisor_count_by_scan(n)));
  }
}

TEST_CASE("kind invariants on an offset range") {
  const u64 lo = 1'000'000'000'000ULL, hi = lo + 20'000;
  const auto phi = sieve_range(FunctionKind::totient, lo, hi);
  const auto mu = sieve_range(FunctionKind::moebius, lo, hi);
  const auto tau = sieve_range(FunctionKind::divisor_count, lo, hi);
  REQUIRE(phi.size() == hi - lo + 1);
  for (u64 n = lo; n <= hi; ++n) {
    const Factorization f = factorize(n);
    REQUIRE(phi[n] >= 1);
    REQUIRE(phi[n] <= static_cast<i64>(n));
    REQUIRE(static_cast<u64>(phi[n]) == totient_of(f));
    if (is_prime(n)) REQUIRE(static_cast<u64>(phi[n]) == n - 1);
    REQUIRE(mu[n] == moebius_of(f));
    REQUIRE(static_cast<u64>(tau[n]) == divisor_count_of(f));
    REQUIRE(tau[n] >= 2);
  }
}

TEST_CASE("segmented sieve agrees with the single-block reference") {
  // Budgets small enough to force many short segments.
  for (const auto kind : {FunctionKind::totient, FunctionKind::moebius, FunctionKind::divisor_count}) {
    for (const auto& [lo, hi] : {std::pair<u64, u64>{1, 50'000}, {12'345, 99'999}, {77'777, 77'777}}) {
      const auto ref = serial::sieve_range_single_block(kind, lo, hi);
      for (const std::size_t budget : {std::size_t{1} << 10, std::size_t{1} << 14, kDefaultMemoryBudget}) {
        CAPTURE(to_string(kind));
        CAPTURE(budget);
        CHECK(sieve_range(kind, lo, hi, budget).values == ref.values);
      }
    }
  }
}

TEST_CASE("map_segments and for_each_segment see identical segments") {
  const std::size_t budget = 4096;
  const auto parallel = map_segments<i64>(FunctionKind::totient, 1, 30'000, budget, [](const SegmentView& s) {
    i64 acc = 0;
    for (u64 n = s.lo; n <= s.hi; ++n) acc += s[n] * static_cast<i64>(n % 7);
    return acc;
  });
  std::vector<i64> serial_parts;
  for_each_segment(FunctionKind::totient, 1, 30'000, budget, [&](const SegmentView& s) {
    i64 acc = 0;
    for (u64 n = s.lo; n <= s.hi; ++n) acc += s[n] * static_cast<i64>(n % 7);
    serial_parts.push_back(acc);
  });
  CHECK(parallel == serial_parts);
  CHECK(parallel.size() > 1);
}

TEST_CASE("budget too small for the base primes is a resource error") {
  CHECK_THROWS_AS(sieve_range(FunctionKind::totient, 1, 1000, 8), ResourceError);
  CHECK_THROWS_AS(plan_segments(1, 1'000'000'000'000ULL, 1024), ResourceError);
  CHECK_THROWS_AS(sieve_range(FunctionKind::totient, 5, 4), DomainError);
  CHECK_THROWS_AS(sieve_range(FunctionKind::totient, 0, 4), DomainError);
}

TEST_CASE("convolution identities up to 10^4") {
  const u64 limit = 10'000;
  const auto phi = sieve_range(FunctionKind::totient, 1, limit);
  const auto mu = sieve_range(FunctionKind::moebius, 1, limit);
  std::vector<i64> phi_sum(limit + 1, 0), mobius_l(limit + 1, 0);
  for (u64 d = 1; d <= limit; ++d) {
    for (u64 m = d; m <= limit; m += d) {
      phi_sum[m] += phi[d];
      mobius_l[m] += mu[d] * static_cast<i64>(m / d);
    }
  }
  for (u64 n = 1; n <= limit; ++n) {
    REQUIRE(phi_sum[n] == static_cast<i64>(n));
    REQUIRE(mobius_l[n] == phi[n]);
  }
}

TEST_CASE("factorize examples") {
  CHECK(factorize(12).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(1).factors.empty());
  CHECK(factorize(97).factors == std::vector<PrimePower>{{97, 1}});
  CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("factorize beyond the trial-division range") {
  const u64 semiprime = 1'000'003ULL * 1'000'033ULL;
  CHECK(factorize(semiprime).factors == std::vector<PrimePower>{{1'000'003, 1}, {1'000'033, 1}});
  const u64 mersenne61 = (u64{1} << 61) - 1;
  CHECK(factorize(mersenne61).factors == std::vector<PrimePower>{{mersenne61, 1}});
  const u64 largest_prime = 18446744073709551557ULL;
  CHECK(is_prime(largest_prime));
  CHECK(factorize(largest_prime).factors.size() == 1);
  const u64 cube = 2'097'143ULL * 2'097'143ULL * 4'194'301ULL;  // p^2 q with p, q > 10^6
  CHECK(factorize(cube).factors == std::vector<PrimePower>{{2'097'143, 2}, {4'194'301, 1}});
}

TEST_CASE("factorization invariants on random 64-bit inputs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const u64 n = rng() >> (rng() % 40);
    if (n == 0) continue;
    const Factorization f = factorize(n);
    u128 prod = 1;
    u64 prev = 1;
    for (const auto& [p, e] : f.factors) {
      REQUIRE(p > prev);
      REQUIRE(is_prime(p));
      for (unsigned j = 0; j < e; ++j) prod *= p;
      prev = p;
    }
    REQUIRE(prod == n);
  }
}

TEST_CASE("totient_of examples") {
  CHECK(totient_of(factorize(10)) == 4);
  CHECK(totient_of(factorize(1)) == 1);
  CHECK(totient_of(factorize(97)) == 96);
}

TEST_CASE("totient_summatory examples and brute force to 10^4") {
  CHECK(totient_summatory(10) == 32);
  CHECK(totient_summatory(1) == 1);
  CHECK(totient_summatory(100) == 3044);
  const auto phi = oracle::totients_by_subtraction(10'000);
  u64 brute = 0;
  for (u64 x = 1; x <= 10'000; ++x) {
    brute += static_cast<u64>(phi[x]);
    REQUIRE(totient_summatory(x) == brute);
  }
}

TEST_CASE("totient_summatory in the memoized regime") {
  // Small budgets push the direct-sieve threshold down and exercise the
  // large-index table.
  for (const u64 x : {1'000'003ULL, 2'718'281ULL, 10'000'000ULL}) {
    u64 direct = 0;
    for_each_segment(FunctionKind::totient, 1, x, kDefaultMemoryBudget, [&](const SegmentView& s) {
      for (u64 n = s.lo; n <= s.hi; ++n) direct += static_cast<u64>(s[n]);
    });
    CHECK(totient_summatory(x) == direct);
    CHECK(totient_summatory(x, 1 << 16) == direct);
    CHECK(totient_summatory(x) - totient_summatory(x - 1) == totient(x));
  }
}

TEST_CASE("totient_summatory overflow is detected") {
  // Φ(10^10) ≈ 3.04e19 > 2^64.
  CHECK_THROWS_AS(totient_summatory(10'000'000'000ULL), ArithmeticError);
  CHECK(totient_summatory(5'000'000'000ULL) > 0);
}

TEST_CASE("sieve cache round trip and byte layout") {
  const auto path = std::filesystem::temp_directory_path() / "phifloor_cache_test.bin";
  const auto table = sieve_range(FunctionKind::moebius, 90, 110);
  write_sieve_cache(path, table);
  CHECK(std::filesystem::file_size(path) == 8 * (3 + 21));
  std::ifstream is(path, std::ios::binary);
  unsigned char head[24];
  is.read(reinterpret_cast<char*>(head), 24);
  CHECK(head[0] == 1);   // kind = moebius
  CHECK(head[8] == 90);  // lo, little endian
  CHECK(head[16] == 110);
  const auto back = read_sieve_cache(path);
  CHECK(back.kind == table.kind);
  CHECK(back.lo == 90);
  CHECK(back.hi == 110);
  CHECK(back.values == table.values);
  {
    std::ofstream os(path, std::ios::binary | std::ios::app);
    os.put('\0');
  }
  CHECK_THROWS(read_sieve_cache(path));
  std::filesystem::resize_file(path, 8 * (3 + 20));
  CHECK_THROWS(read_sieve_cache(path));
  std::filesystem::remove(path);
}

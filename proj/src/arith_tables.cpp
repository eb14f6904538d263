#include "phifloor/arith_tables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

namespace phifloor {

const char* to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::totient: return "totient";
    case FunctionKind::moebius: return "moebius";
    case FunctionKind::divisor_count: return "divisor_count";
  }
  return "unknown";
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<std::uint32_t> primes_up_to(u64 limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

namespace {

// Rosser-Schoenfeld style upper bound on π(n), enough to size the base primes.
std::size_t prime_count_upper(u64 n) {
  if (n < 17) return 7;
  const double nd = static_cast<double>(n);
  return static_cast<std::size_t>(1.25506 * nd / std::log(nd)) + 1;
}

void check_range(u64 lo, u64 hi) {
  if (lo < 1 || lo > hi) {
    throw DomainError("sieve range requires 1 <= lo <= hi (got lo=" + std::to_string(lo) +
                      ", hi=" + std::to_string(hi) + ")");
  }
}

}  // namespace

SegmentPlan plan_segments(u64 lo, u64 hi, std::size_t memory_budget) {
  check_range(lo, hi);
  const std::size_t prime_bytes = prime_count_upper(isqrt(hi)) * sizeof(std::uint32_t);
  if (memory_budget < prime_bytes + kSieveBytesPerEntry) {
    throw ResourceError("memory budget of " + std::to_string(memory_budget) +
                        " bytes cannot hold the base primes up to sqrt(" + std::to_string(hi) +
                        ") plus one sieve entry");
  }
  const u64 by_budget = (memory_budget - prime_bytes) / kSieveBytesPerEntry;
  const u64 span = hi - lo + 1;
  return SegmentPlan{lo, hi, std::min(by_budget, span)};
}

void sieve_segment(FunctionKind kind, u64 lo, u64 hi, std::span<const std::uint32_t> base_primes,
                   std::span<i64> out, std::span<u64> cofactor) {
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  for (std::size_t i = 0; i < len; ++i) {
    const u64 n = lo + i;
    cofactor[i] = n;
    out[i] = (kind == FunctionKind::totient) ? static_cast<i64>(n) : 1;
  }
  for (const std::uint32_t p32 : base_primes) {
    const u64 p = p32;
    if (p * p > hi) break;
    u64 m = ((lo + p - 1) / p) * p;
    for (; m <= hi; m += p) {
      const std::size_t i = static_cast<std::size_t>(m - lo);
      u64 c = cofactor[i];
      switch (kind) {
        case FunctionKind::totient:
          out[i] -= out[i] / static_cast<i64>(p);
          do c /= p; while (c % p == 0);
          break;
        case FunctionKind::moebius:
          if ((m / p) % p == 0) {
            out[i] = 0;
          } else {
            out[i] = -out[i];
          }
          c /= p;
          break;
        case FunctionKind::divisor_count: {
          i64 e = 0;
          do {
            c /= p;
            ++e;
          } while (c % p == 0);
          out[i] *= e + 1;
          break;
        }
      }
      cofactor[i] = c;
    }
  }
  // At most one prime factor above sqrt(hi) survives.
  for (std::size_t i = 0; i < len; ++i) {
    const u64 c = cofactor[i];
    if (c <= 1) continue;
    switch (kind) {
      case FunctionKind::totient: out[i] -= out[i] / static_cast<i64>(c); break;
      case FunctionKind::moebius: out[i] = -out[i]; break;
      case FunctionKind::divisor_count: out[i] *= 2; break;
    }
  }
}

SieveTable sieve_range(FunctionKind kind, u64 lo, u64 hi, std::size_t memory_budget) {
  const SegmentPlan plan = plan_segments(lo, hi, memory_budget);
  const auto base = primes_up_to(isqrt(hi));
  SieveTable table{kind, lo, hi, std::vector<i64>(static_cast<std::size_t>(hi - lo + 1))};
  const std::size_t count = plan.count();
  ParallelErrors errors;
#pragma omp parallel
  {
    std::vector<u64> cofactor(plan.segment_len);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t s = 0; s < count; ++s) {
      errors.guard(s, [&] {
        const auto [a, b] = plan.segment(s);
        const auto len = static_cast<std::size_t>(b - a + 1);
        sieve_segment(kind, a, b, base, std::span<i64>(table.values.data() + (a - lo), len),
                      std::span<u64>(cofactor.data(), len));
      });
    }
  }
  errors.rethrow();
  return table;
}

namespace serial {

// Linear (Euler) sieve over [1, hi] tracking the smallest prime factor's
// exponent; independent of the segmented code path.
SieveTable sieve_range_single_block(FunctionKind kind, u64 lo, u64 hi) {
  check_range(lo, hi);
  const std::size_t n = static_cast<std::size_t>(hi);
  std::vector<i64> f(n + 1, 0);
  std::vector<std::uint32_t> lp_exp(n + 1, 0);   // exponent of the least prime
  std::vector<u64> lp_pow(n + 1, 0);             // least prime to that exponent
  std::vector<u64> primes;
  f[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (lp_pow[i] == 0) {
      primes.push_back(i);
      lp_pow[i] = i;
      lp_exp[i] = 1;
      switch (kind) {
        case FunctionKind::totient: f[i] = static_cast<i64>(i) - 1; break;
        case FunctionKind::moebius: f[i] = -1; break;
        case FunctionKind::divisor_count: f[i] = 2; break;
      }
    }
    for (const u64 p : primes) {
      const u64 ip = i * p;
      if (ip > n) break;
      if (i % p == 0) {
        // p is the least prime of i: bump its exponent.
        lp_pow[ip] = lp_pow[i] * p;
        lp_exp[ip] = lp_exp[i] + 1;
        const u64 rest = ip / lp_pow[ip];
        const i64 fr = f[rest];
        switch (kind) {
          case FunctionKind::totient:
            f[ip] = fr * static_cast<i64>(lp_pow[ip] - lp_pow[ip] / p);
            break;
          case FunctionKind::moebius: f[ip] = 0; break;
          case FunctionKind::divisor_count: f[ip] = fr * static_cast<i64>(lp_exp[ip] + 1); break;
        }
        break;
      }
      lp_pow[ip] = p;
      lp_exp[ip] = 1;
      switch (kind) {
        case FunctionKind::totient: f[ip] = f[i] * static_cast<i64>(p - 1); break;
        case FunctionKind::moebius: f[ip] = -f[i]; break;
        case FunctionKind::divisor_count: f[ip] = f[i] * 2; break;
      }
    }
  }
  return SieveTable{kind, lo, hi, std::vector<i64>(f.begin() + static_cast<std::ptrdiff_t>(lo), f.end())};
}

}  // namespace serial

// -- factorization ----------------------------------------------------------

namespace {

constexpr u64 kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& trial_primes() {
  static const std::vector<std::uint32_t> primes = primes_up_to(kTrialLimit);
  return primes;
}

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 e, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

// Brent's variant of Pollard rho. n must be odd composite.
u64 rho_factor(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 batch = 128;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += batch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = rho_factor(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (const u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic base set for all n < 2^64.
  for (const u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    const u64 base = a % n;
    if (base == 0) continue;
    u64 x = pow_mod(base, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Factorization factorize(u64 n) {
  if (n == 0) throw DomainError("factorize: n must be >= 1");
  Factorization f{n, {}};
  u64 rest = n;
  for (const std::uint32_t p32 : trial_primes()) {
    const u64 p = p32;
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    do {
      rest /= p;
      ++e;
    } while (rest % p == 0);
    f.factors.push_back({p, e});
  }
  if (rest == 1) return f;
  if (rest < kTrialLimit * kTrialLimit) {
    f.factors.push_back({rest, 1});
    return f;
  }
  std::vector<u64> big;
  split_large(rest, big);
  std::sort(big.begin(), big.end());
  for (const u64 p : big) {
    if (!f.factors.empty() && f.factors.back().prime == p) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

u64 totient_of(const Factorization& f) {
  u64 r = f.n;
  for (const auto& [p, e] : f.factors) r = r / p * (p - 1);
  return r;
}

int moebius_of(const Factorization& f) {
  int r = 1;
  for (const auto& pe : f.factors) {
    if (pe.exponent > 1) return 0;
    r = -r;
  }
  return r;
}

u64 divisor_count_of(const Factorization& f) {
  u64 r = 1;
  for (const auto& pe : f.factors) r *= pe.exponent + 1;
  return r;
}

// -- summatory totient ------------------------------------------------------

u64 totient_summatory(u64 x, std::size_t memory_budget) {
  if (x == 0) throw DomainError("totient_summatory: x must be >= 1");
  const u64 root = isqrt(x);
  // Direct threshold ~ x^{2/3}, never below sqrt(x) so large indices stay <= sqrt(x).
  const u64 cube = icbrt(x);
  u64 small_limit = std::max<u64>(root, cube * cube);
  const u64 budget_entries = memory_budget / kSieveBytesPerEntry;
  if (budget_entries < root + 1) {
    throw ResourceError("totient_summatory: memory budget cannot hold sqrt(x) entries");
  }
  small_limit = std::max<u64>(std::min(small_limit, budget_entries), std::min<u64>(x, 16));

  SieveTable table = sieve_range(FunctionKind::totient, 1, small_limit, memory_budget);
  // Reuse the table as prefix sums Φ(0..small_limit), index shifted by one.
  std::vector<u64> prefix(static_cast<std::size_t>(small_limit) + 1, 0);
  for (u64 n = 1; n <= small_limit; ++n) prefix[n] = prefix[n - 1] + static_cast<u64>(table[n]);
  table.values = {};
  table.values.shrink_to_fit();
  if (x <= small_limit) return prefix[x];

  const u64 imax = x / (small_limit + 1);  // x/i > small_limit  <=>  i <= imax
  std::vector<u128> large(static_cast<std::size_t>(imax) + 1, 0);
  for (u64 i = imax; i >= 1; --i) {
    const u64 v = x / i;
    i128 s = static_cast<i128>(static_cast<u128>(v) * (static_cast<u128>(v) + 1) / 2);
    for (u64 m = 2; m <= v;) {
      const u64 q = v / m;
      const u64 m_hi = v / q;
      const u128 phi_q = (q <= small_limit) ? u128{prefix[q]} : large[i * m];
      s -= static_cast<i128>(static_cast<u128>(m_hi - m + 1) * phi_q);
      m = m_hi + 1;
    }
    large[i] = static_cast<u128>(s);
  }
  return narrow_u64(large[1], "totient_summatory");
}

// -- on-disk cache ----------------------------------------------------------

namespace {

void put_le(std::ostream& os, u64 v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 8);
}

u64 get_le(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), 8);
  if (!is) throw std::runtime_error("sieve cache: truncated file");
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_sieve_cache(const std::filesystem::path& path, const SieveTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("sieve cache: cannot open " + path.string());
  put_le(os, static_cast<u64>(table.kind));
  put_le(os, table.lo);
  put_le(os, table.hi);
  for (const i64 v : table.values) put_le(os, static_cast<u64>(v));
  if (!os) throw std::runtime_error("sieve cache: write failed for " + path.string());
}

SieveTable read_sieve_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("sieve cache: cannot open " + path.string());
  const u64 kind = get_le(is);
  if (kind > 2) throw std::runtime_error("sieve cache: unknown function kind");
  SieveTable t;
  t.kind = static_cast<FunctionKind>(kind);
  t.lo = get_le(is);
  t.hi = get_le(is);
  check_range(t.lo, t.hi);
  const u64 count = t.hi - t.lo + 1;
  const auto size = std::filesystem::file_size(path);
  if (count > (size - 24) / 8 || size != 24 + 8 * count) {
    throw std::runtime_error("sieve cache: file size does not match its header");
  }
  t.values.resize(static_cast<std::size_t>(count));
  for (auto& v : t.values) v = static_cast<i64>(get_le(is));
  return t;
}

}  // namespace phifloor

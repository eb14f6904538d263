#include "phifloor/aux_sums.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "phifloor/arith_tables.hpp"
#include "phifloor/parallel.hpp"

namespace phifloor {

namespace {

constexpr u64 kMobiusChunk = 2048;

// μ(k)/k · ψ(x/q) = μ(k)(2r - q) / (2qk) with r = x mod q.
Rational mobius_term(i64 mu, u64 k, u64 x, u64 q) {
  const i128 r = static_cast<i128>(x % q);
  return Rational::from_wide(mu * (2 * r - static_cast<i128>(q)),
                             2 * static_cast<i128>(q) * static_cast<i128>(k));
}

void add_mobius_k(AccurateSum& acc, const AuxSumParams& p, u64 k, i64 mu) {
  if (mu == 0) return;
  const u64 l_lo = p.n / k + 1;
  const u64 l_hi = (2 * p.n) / k;
  for (u64 l = l_lo; l <= l_hi; ++l) {
    acc.add(mobius_term(mu, k, p.x, k * l + static_cast<u64>(p.delta)));
  }
}

}  // namespace

void validate(const AuxSumParams& p) {
  if (p.delta != 0 && p.delta != 1) throw DomainError("aux sum: delta must be 0 or 1");
  if (p.n < 1) throw DomainError("aux sum: N must be >= 1");
  if (p.n > p.x) {
    throw DomainError("aux sum: N = " + std::to_string(p.n) + " exceeds x = " + std::to_string(p.x));
  }
}

AccurateSum frak_S(const AuxSumParams& p) {
  validate(p);
  const SieveTable phi = sieve_range(FunctionKind::totient, p.n + 1, 2 * p.n);
  AccurateSum acc;
  for (u64 n = p.n + 1; n <= 2 * p.n; ++n) {
    const Rational psi = psi_rational(p.x, n + static_cast<u64>(p.delta));
    const Rational w = p.weighted ? Rational(phi[n], static_cast<i64>(n)) : Rational(phi[n]);
    acc.add(w * psi);
  }
  return acc;
}

AccurateSum frak_S_star_mobius(const AuxSumParams& p) {
  validate(p);
  const u64 k_max = 2 * p.n;
  const SieveTable mu = sieve_range(FunctionKind::moebius, 1, k_max);
  const std::size_t chunks = static_cast<std::size_t>((k_max + kMobiusChunk - 1) / kMobiusChunk);
  std::vector<AccurateSum> partials(chunks);
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < chunks; ++c) {
    errors.guard(c, [&] {
      const u64 k_lo = 1 + static_cast<u64>(c) * kMobiusChunk;
      const u64 k_hi = std::min(k_max, k_lo + kMobiusChunk - 1);
      for (u64 k = k_lo; k <= k_hi; ++k) add_mobius_k(partials[c], p, k, mu[k]);
    });
  }
  errors.rethrow();
  AccurateSum total;
  for (const auto& part : partials) total.merge(part);
  return total;
}

namespace serial {

AccurateSum frak_S_star_mobius(const AuxSumParams& p) {
  validate(p);
  AccurateSum acc;
  for (u64 k = 1; k <= 2 * p.n; ++k) add_mobius_k(acc, p, k, moebius_of(factorize(k)));
  return acc;
}

}  // namespace serial

double huxley_envelope(u64 x) {
  if (x < 2) throw DomainError("huxley_envelope: x must be >= 2");
  const double lx = std::log(static_cast<double>(x));
  return std::exp(131.0 / 416.0 * lx + 18627.0 / 8320.0 * std::log(lx));
}

bool admissible_n(u64 x, u64 n) {
  return static_cast<u128>(kAdmissibleC.den()) * n <= static_cast<u128>(kAdmissibleC.num()) * x;
}

double derivative_abs(u64 x, u64 k, int delta, int order, double z) {
  const double denom = static_cast<double>(k) * z + delta;
  double v = static_cast<double>(x) / denom;
  const double ratio = static_cast<double>(k) / denom;
  for (int j = 1; j <= order; ++j) v *= j * ratio;
  return v;
}

double derivative(u64 x, u64 k, int delta, int order, double z) {
  const double a = derivative_abs(x, k, delta, order, z);
  return (order % 2 == 0) ? a : -a;
}

bool DerivativeCheckReport::lower_bounds_held() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.lower_bound_held; });
}

bool DerivativeCheckReport::signs_alternate() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.sign_alternates; });
}

double DerivativeCheckReport::max_fd_error() const {
  double worst = 0;
  for (const auto& r : records) worst = std::max(worst, r.fd_max_rel_error);
  return worst;
}

DerivativeCheckReport derivative_check(u64 x, u64 k, u64 n, int delta, u64 samples) {
  if (delta != 0 && delta != 1) throw DomainError("derivative_check: delta must be 0 or 1");
  if (samples < 1) throw DomainError("derivative_check: samples must be >= 1");
  if (k < 1 || k >= n) throw DomainError("derivative_check: requires 1 <= k < N");
  if (!admissible_n(x, n)) throw DomainError("derivative_check: requires N <= (5/972) x");
  DerivativeCheckReport rep;
  rep.x = x;
  rep.k = k;
  rep.n = n;
  rep.delta = delta;
  rep.m = n / k;
  rep.t = static_cast<double>(kAdmissibleC.num()) * static_cast<double>(x) /
          (static_cast<double>(kAdmissibleC.den()) * static_cast<double>(n));
  const double m = static_cast<double>(rep.m);
  auto f = [&](double z) { return derivative(x, k, delta, 0, z); };

  for (int j = 0; j <= kMaxDerivativeOrder; ++j) {
    DerivativeOrderRecord r;
    r.order = j;
    r.lower_bound = rep.t / std::pow(m, j);
    r.min_abs = INFINITY;
    for (u64 s = 0; s < samples; ++s) {
      const double z = samples == 1 ? m : m + m * static_cast<double>(s) / static_cast<double>(samples - 1);
      const double d = derivative(x, k, delta, j, z);
      const double a = std::fabs(d);
      r.min_abs = std::min(r.min_abs, a);
      r.max_abs = std::max(r.max_abs, a);
      if (a < r.lower_bound) r.lower_bound_held = false;
      if ((d > 0) != (j % 2 == 0)) r.sign_alternates = false;
      if (j == 1) {
        const double h = m * kFdStepFirst;
        const double fd = (f(z + h) - f(z - h)) / (2 * h);
        r.fd_max_rel_error = std::max(r.fd_max_rel_error, std::fabs(fd - d) / a);
      } else if (j == 2) {
        const double h = m * kFdStepSecond;
        const double fd = (f(z + h) - 2 * f(z) + f(z - h)) / (h * h);
        r.fd_max_rel_error = std::max(r.fd_max_rel_error, std::fabs(fd - d) / a);
      }
    }
    r.implied_c = r.max_abs * std::pow(m, j) / rep.t;
    rep.records.push_back(r);
  }
  return rep;
}

std::vector<AdmissibleTuple> sample_admissible(std::uint64_t seed, std::size_t count, u64 x_min, u64 x_max) {
  // Smallest x with ⌊5x/972⌋ >= 2, so that some k < N exists.
  x_min = std::max<u64>(x_min, 389);
  if (x_max < x_min) throw DomainError("sample_admissible: empty x range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](u64 lo, u64 hi) {
    const double v = std::exp(std::log(static_cast<double>(lo)) +
                              unit(rng) * (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(lo))));
    return std::clamp(static_cast<u64>(std::llround(v)), lo, hi);
  };
  std::vector<AdmissibleTuple> out;
  out.reserve(count);
  while (out.size() < count) {
    const u64 x = log_uniform(x_min, x_max);
    const u64 n_max = static_cast<u64>(static_cast<u128>(x) * kAdmissibleC.num() / kAdmissibleC.den());
    if (n_max < 2) continue;
    const u64 n = log_uniform(2, n_max);
    const u64 k = log_uniform(1, n - 1);
    const int delta = unit(rng) < 0.5 ? 0 : 1;
    out.push_back({x, k, n, delta});
  }
  return out;
}

}  // namespace phifloor

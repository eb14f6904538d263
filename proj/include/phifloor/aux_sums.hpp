#pragma once

// Sawtooth-weighted totient sums over a dyadic range (N, 2N]
//     direct:  Σ_{N<n<=2N} w(n) ψ(x/(n+δ)),   w = φ or φ(n)/n
//     Möbius:  Σ_{k<=2N} μ(k)/k Σ_{N/k<l<=2N/k} ψ(x/(kl+δ))
// plus checks of the derivative sandwich for f(z) = x/(kz+δ) on [M, 2M].

#include <cstdint>
#include <vector>

#include "phifloor/exact_psi.hpp"

namespace phifloor {

struct AuxSumParams {
  u64 x{1};
  u64 n{1};  // N
  int delta{0};
  bool weighted{true};
};

/// Throws DomainError unless 1 <= N <= x and delta is 0 or 1.
void validate(const AuxSumParams& params);

/// Direct evaluation over n in (N, 2N].
AccurateSum frak_S(const AuxSumParams& params);

/// Möbius-decomposed evaluation of the weighted sum (params.weighted is
/// ignored). The k-loop runs over every k <= 2N, in parallel chunks merged in
/// ascending order.
AccurateSum frak_S_star_mobius(const AuxSumParams& params);

namespace serial {
AccurateSum frak_S_star_mobius(const AuxSumParams& params);
}  // namespace serial

/// x^{131/416} (ln x)^{18627/8320}, x >= 2.
double huxley_envelope(u64 x);

/// Admissible scale constant 6!/(3·6^6) = 5/972, kept exact.
inline const Rational kAdmissibleC{5, 972};

/// True iff N <= (5/972) x.
bool admissible_n(u64 x, u64 n);

/// |d^j/dz^j x/(kz+δ)| = j! k^j x / (kz+δ)^{j+1}.
double derivative_abs(u64 x, u64 k, int delta, int order, double z);

/// Signed j-th derivative of z -> x/(kz+δ).
double derivative(u64 x, u64 k, int delta, int order, double z);

inline constexpr int kMaxDerivativeOrder = 6;

struct DerivativeOrderRecord {
  int order{0};
  double min_abs{0};
  double max_abs{0};
  double lower_bound{0};   // T / M^j
  double implied_c{0};     // max |f^(j)| M^j / T
  bool lower_bound_held{true};
  bool sign_alternates{true};
  double fd_max_rel_error{-1};  // orders 1 and 2 only; -1 elsewhere
};

struct DerivativeCheckReport {
  u64 x{0};
  u64 k{0};
  u64 n{0};
  int delta{0};
  u64 m{0};      // ⌊N/k⌋
  double t{0};   // (5/972) x / N
  std::vector<DerivativeOrderRecord> records;  // orders 0..6

  bool lower_bounds_held() const;
  bool signs_alternate() const;
  double max_fd_error() const;
};

/// Central-difference steps relative to M.
inline constexpr double kFdStepFirst = 0x1p-20;
inline constexpr double kFdStepSecond = 0x1p-13;

/// Samples `samples` equally spaced points of [M, 2M] (endpoints included).
/// Throws DomainError unless k < N <= (5/972)x, M >= 1, delta in {0,1}.
/// A failed lower bound is reported, not thrown.
DerivativeCheckReport derivative_check(u64 x, u64 k, u64 n, int delta, u64 samples);

struct AdmissibleTuple {
  u64 x;
  u64 k;
  u64 n;
  int delta;
};

/// Seeded draw of admissible (x, k, N, δ): x log-uniform in [x_min, x_max],
/// N log-uniform in [2, ⌊5x/972⌋], k log-uniform in [1, N-1].
std::vector<AdmissibleTuple> sample_admissible(std::uint64_t seed, std::size_t count,
                                               u64 x_min = 1'000, u64 x_max = 1'000'000'000);

}  // namespace phifloor

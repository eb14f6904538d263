#pragma once

// Constants, main terms and residual series for the totient floor sums, the
// exact identity checks behind the error-term arguments, and log-log fitting
// of empirical error exponents.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phifloor/arith_tables.hpp"
#include "phifloor/big_rational.hpp"
#include "phifloor/exact_psi.hpp"
#include "phifloor/floor_sums.hpp"

namespace phifloor {

// -- zeta ---------------------------------------------------------------------

/// ζ(s) - 1 for real s >= 2 by Euler-Maclaurin; relative error ~1e-16.
double zeta_minus_one(double s);
double zeta(double s);

// -- C0 = Σ φ(n)/(n²(n+1)) --------------------------------------------------

struct Bracket {
  double lo{0};
  double hi{0};
  double mid() const { return lo + (hi - lo) / 2; }
  double half_width() const { return (hi - lo) / 2; }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct C0Estimate {
  Bracket bracket;
  u64 terms{0};  // N for the direct sum, series length for the zeta route
};

/// Rigorous tail bound for Σ_{n>N} φ(n)/(n²(n+1)) around (6/π²)/(N+1).
double c0_tail_error(u64 n);

/// Partial sum to N plus tail (6/π²)/(N+1) ± c0_tail_error(N), with N the
/// smallest power of two meeting the tolerance. tolerance >= 1e-12.
C0Estimate constant_C0(double tolerance, std::size_t memory_budget = kDefaultMemoryBudget);

/// Same bracket for a caller-chosen N.
C0Estimate constant_C0_direct(u64 n, std::size_t memory_budget = kDefaultMemoryBudget);

/// 1/2 + Σ_{j>=0} (-1)^j (ζ(j+2)/ζ(j+3) - 1), bracketed by consecutive
/// partial sums of the alternating series.
C0Estimate constant_C0_zeta_series(double tolerance);

struct Constants {
  double zeta2{0};
  double euler_gamma{0};
  Bracket c0;
  Rational c_admissible{5, 972};
  double thm2_lower{0};   // (285/416)/ζ(2)
  double thm2_upper{0};   // thm2_lower + 131/416
  double wu_lower{0};     // (2/3)/ζ(2)
  double wu_upper{0};     // wu_lower + 1/3
  double bdhps_lower{0};  // (2629/4009)/ζ(2)
  double bdhps_upper{0};  // bdhps_lower + 1380/4009
};

Constants compute_constants(double c0_tolerance = 1e-12, std::size_t memory_budget = kDefaultMemoryBudget);

// -- envelopes ------------------------------------------------------------------

/// c · x^alpha · (ln x)^beta.
struct BoundModel {
  std::string name;
  Rational alpha;
  Rational beta;
  double c{1.0};

  double envelope(double x) const;
};

/// x^{1/2}, the classical envelope for S*.
BoundModel sqrt_model();
/// x^{1/3} ln x.
BoundModel wu_model();
/// x^{131/416} (ln x)^{26947/8320}.
BoundModel huxley_model();

// -- residual series ----------------------------------------------------------------

struct ResidualRecord {
  u64 x{0};
  double sum_value{0};
  double sum_error_bound{0};
  double main_term{0};
  double main_term_uncertainty{0};
  double residual{0};
  double ratio_sqrt{0};
  double ratio_wu{0};
  double ratio_huxley{0};
};

/// R*(x) = S*(x) - C0·x, normalized by each stock envelope. x >= 3.
ResidualRecord residual_thm1(u64 x, const Constants& k, SumMethod method = SumMethod::automatic,
                             std::size_t memory_budget = kDefaultMemoryBudget);

/// Residual records for every grid point, computed in parallel, ordered by x.
std::vector<ResidualRecord> residual_series_thm1(std::span<const u64> grid, const Constants& k,
                                                 std::size_t memory_budget = kDefaultMemoryBudget);

struct Thm1Calibration {
  double c_max{0};
  u64 argmax{0};
  u64 x_lo{0};
  u64 x_hi{0};
};

/// max |R*(x)| / huxley_model().envelope(x) over every integer x in [x_lo, x_hi].
Thm1Calibration calibrate_thm1(const Constants& k, u64 x_lo = 3, u64 x_hi = 100'000);

struct Thm2Record {
  u64 x{0};
  u64 sum{0};
  double ratio{0};  // S(x) / (x ln x)
};

Thm2Record residual_thm2(u64 x, SumMethod method = SumMethod::automatic,
                         std::size_t memory_budget = kDefaultMemoryBudget);

/// Σ_{n<=x} φ(n)/n² - (ln x)/ζ(2), x >= 2.
double phi_over_n2_drift(u64 x, std::size_t memory_budget = kDefaultMemoryBudget);

struct DivisorRecord {
  u64 x{0};
  u64 divisor_sum{0};
  double main_term{0};
  double delta{0};
  double ratio_sqrt{0};
  double ratio_huxley{0};
};

DivisorRecord divisor_record(u64 x);

// -- identity checks ----------------------------------------------------------------

struct DecompositionCheck {
  u64 x{0};
  u64 head_terms{0};  // n <= x/(⌊5x/972⌋+1), summed term by term
  u64 d_max{0};       // ⌊5x/972⌋
  double direct{0};
  double decomposed{0};
  double difference{0};
  double bound{0};
  std::optional<bool> exact_equal;  // both sides in exact rationals, x <= 2000
};

/// Evaluates S*(x) term by term and through Σ_{d<=Cx} (φ(d)/d)(x/(d(d+1)) +
/// ψ(x/(d+1)) - ψ(x/d)) plus the head. 3 <= x <= 10^5.
DecompositionCheck s_star_decomposition_check(u64 x, u64 exact_cap = kExactRationalCap);

struct AbelCheck {
  u64 x{0};
  double d{0};
  double upper{0};  // X = x/D
  double lhs{0};
  double rhs{0};
  double difference{0};
  double bound{0};
};

/// Σ_{d<=X} φ(d)b_d against X·A(X) - ∫_1^X A(t) dt, with b_d = ψ(x/(d+1)) -
/// ψ(x/d), A(t) = Σ_{d<=t} (φ(d)/d)b_d and the integral summed exactly over
/// integer breakpoints. Requires D >= 972/5 and x/D <= 10^5.
AbelCheck abel_identity_check(u64 x, double d);

// -- fitting --------------------------------------------------------------------

struct FitResult {
  double slope{0};
  double intercept{0};
  double r_squared{0};
  std::size_t points_used{0};
};

/// Least squares of ln|y| on ln x; zero or non-finite y are dropped. Throws
/// DomainError with fewer than 5 usable points.
FitResult fit_log_log(std::span<const double> xs, std::span<const double> ys);
FitResult fit_exponent(std::span<const ResidualRecord> records);

// -- split point ----------------------------------------------------------------

struct SplitChoice {
  double d{0};
  u64 threshold{0};  // smallest x >= 3 with D(x) >= 972/5
  bool admissible{false};
};

/// D = x^{131/416} (ln x)^{26947/8320}. x >= 3.
SplitChoice choose_D(u64 x);

/// round(x_min · ratio^k) for k = 0, 1, ... up to x_max, with x_max appended
/// when the last point falls short of it. ratio > 1.
std::vector<u64> geometric_grid(u64 x_min, u64 x_max, double ratio);

}  // namespace phifloor

#include "phifloor/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "phifloor/aux_sums.hpp"
#include "phifloor/constants.hpp"
#include "phifloor/parallel.hpp"

namespace phifloor {

namespace {

constexpr double kU = AccurateSum::kUnitRoundoff;
constexpr long double kUL = std::numeric_limits<long double>::epsilon() / 2;

// Neumaier summation in extended precision, bound K·u·Σ|t| as for AccurateSum.
class WideSum {
 public:
  void add(long double t) {
    const long double s = sum_ + t;
    comp_ += std::fabs(sum_) >= std::fabs(t) ? (sum_ - s) + t : (t - s) + sum_;
    sum_ = s;
    mass_ += std::fabs(t);
  }
  long double value() const { return sum_ + comp_; }
  long double abs_mass() const { return mass_; }
  long double error_bound() const { return 4 * kUL * mass_; }

 private:
  long double sum_{0};
  long double comp_{0};
  long double mass_{0};
};

long double wide_value(const Rational& r) {
  return static_cast<long double>(r.num()) / static_cast<long double>(r.den());
}

// B_{2k} / (2k)!, k = 1..10.
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
};

double rational_value(const Rational& r) { return r.to_double(); }

}  // namespace

double zeta_minus_one(double s) {
  if (!(s >= 2.0)) throw DomainError("zeta: requires s >= 2");
  constexpr int m = 20;
  double head = 0.0;
  for (int n = m - 1; n >= 2; --n) head += std::pow(static_cast<double>(n), -s);
  const double md = m;
  double tail = std::pow(md, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(md, -s);
  double rising = s;             // s(s+1)...(s+2k-2)
  double power = std::pow(md, -s - 1.0);  // m^{-s-2k+1}
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    tail += kBernoulliOverFactorial[k] * rising * power;
    rising *= (s + 2.0 * static_cast<double>(k) + 1.0) * (s + 2.0 * static_cast<double>(k) + 2.0);
    power /= md * md;
  }
  return head + tail;
}

double zeta(double s) { return 1.0 + zeta_minus_one(s); }

// -- C0 -------------------------------------------------------------------------

double c0_tail_error(u64 n) {
  if (n < 1) throw DomainError("c0_tail_error: N must be >= 1");
  const double nd = static_cast<double>(n);
  return (6.5 + std::log(nd) + std::log(nd + 1.0)) / ((nd + 1.0) * (nd + 2.0));
}

C0Estimate constant_C0_direct(u64 n, std::size_t memory_budget) {
  if (n < 1) throw DomainError("constant_C0: N must be >= 1");
  const auto partials = map_segments<AccurateSum>(
      FunctionKind::totient, 1, n, memory_budget, [](const SegmentView& seg) {
        AccurateSum acc;
        for (u64 m = seg.lo; m <= seg.hi; ++m) {
          const double md = static_cast<double>(m);
          acc.add(static_cast<double>(seg[m]) / md / (md * (md + 1.0)));
        }
        return acc;
      });
  AccurateSum total;
  for (const auto& p : partials) total.merge(p);
  const double nd = static_cast<double>(n);
  const double centre = total.value() + static_cast<double>(kInvZeta2) / (nd + 1.0);
  // Each term carries up to two extra roundings on top of the accumulator bound.
  const double slack = total.error_bound() + 3.0 * kU * total.abs_mass() + 4.0 * kU * centre;
  const double half = c0_tail_error(n) + slack;
  // The tail is positive and below Σ_{m>N} 1/(m(m+1)) = 1/(N+1).
  const double partial_slack = total.error_bound() + 3.0 * kU * total.abs_mass();
  const double lo = std::max(centre - half, total.value() - partial_slack);
  const double hi = std::min(centre + half, total.value() + 1.0 / (nd + 1.0) + partial_slack + kU);
  return C0Estimate{Bracket{lo, hi}, n};
}

C0Estimate constant_C0(double tolerance, std::size_t memory_budget) {
  if (!(tolerance >= 1e-12)) throw DomainError("constant_C0: tolerance must be >= 1e-12");
  constexpr u64 kMaxTerms = u64{1} << 32;
  u64 n = 1024;
  while (2 * c0_tail_error(n) + 1e-14 > tolerance) {
    n *= 2;
    if (n > kMaxTerms) throw ResourceError("constant_C0: tolerance needs more than 2^32 terms");
  }
  return constant_C0_direct(n, memory_budget);
}

C0Estimate constant_C0_zeta_series(double tolerance) {
  if (!(tolerance > 0)) throw DomainError("constant_C0_zeta_series: tolerance must be positive");
  auto term = [](int j) {
    const double a = zeta_minus_one(j + 2.0);
    const double b = zeta_minus_one(j + 3.0);
    return (a - b) / (1.0 + b);
  };
  AccurateSum acc;
  acc.add(0.5);
  int j = 0;
  double t = term(0);
  // Terms equal Σ_{n>=2} φ(n) n^{-(j+3)}, so they decrease monotonically.
  while (true) {
    acc.add((j % 2 == 0) ? t : -t);
    const double next = term(j + 1);
    if (next < tolerance / 4 || j > 200) {
      const double s0 = acc.value();
      const double s1 = s0 + ((j % 2 == 0) ? -next : next);
      // Each ζ-term is good to a few ulps relative.
      const double slack = acc.error_bound() + 16.0 * kU * acc.abs_mass();
      return C0Estimate{Bracket{std::min(s0, s1) - slack, std::max(s0, s1) + slack},
                        static_cast<u64>(j + 1)};
    }
    t = next;
    ++j;
  }
}

Constants compute_constants(double c0_tolerance, std::size_t memory_budget) {
  Constants k;
  k.zeta2 = zeta(2.0);
  k.euler_gamma = static_cast<double>(kEulerGamma);
  k.c0 = constant_C0(c0_tolerance, memory_budget).bracket;
  const double inv = 1.0 / k.zeta2;
  k.thm2_lower = 285.0 / 416.0 * inv;
  k.thm2_upper = k.thm2_lower + 131.0 / 416.0;
  k.wu_lower = 2.0 / 3.0 * inv;
  k.wu_upper = k.wu_lower + 1.0 / 3.0;
  k.bdhps_lower = 2629.0 / 4009.0 * inv;
  k.bdhps_upper = k.bdhps_lower + 1380.0 / 4009.0;
  return k;
}

// -- envelopes --------------------------------------------------------------------

double BoundModel::envelope(double x) const {
  const double lx = std::log(x);
  return c * std::exp(rational_value(alpha) * lx + rational_value(beta) * std::log(lx));
}

BoundModel sqrt_model() { return {"sqrt", Rational(1, 2), Rational(0), 1.0}; }
BoundModel wu_model() { return {"wu", Rational(1, 3), Rational(1), 1.0}; }
BoundModel huxley_model() { return {"huxley", Rational(131, 416), Rational(26947, 8320), 1.0}; }

// -- residuals --------------------------------------------------------------------

ResidualRecord residual_thm1(u64 x, const Constants& k, SumMethod method, std::size_t memory_budget) {
  if (x < 3) throw DomainError("residual_thm1: x must be >= 3");
  const SumResult s = sum_phi_over_floor(x, method, memory_budget, 0);
  ResidualRecord r;
  const double xd = static_cast<double>(x);
  r.x = x;
  r.sum_value = s.value();
  r.sum_error_bound = s.error_bound();
  r.main_term = k.c0.mid() * xd;
  r.main_term_uncertainty = k.c0.half_width() * xd;
  r.residual = r.sum_value - r.main_term;
  r.ratio_sqrt = r.residual / sqrt_model().envelope(xd);
  r.ratio_wu = r.residual / wu_model().envelope(xd);
  r.ratio_huxley = r.residual / huxley_model().envelope(xd);
  return r;
}

std::vector<ResidualRecord> residual_series_thm1(std::span<const u64> grid, const Constants& k,
                                                 std::size_t memory_budget) {
  std::vector<ResidualRecord> out(grid.size());
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i);
    errors.guard(j, [&] { out[j] = residual_thm1(grid[j], k, SumMethod::automatic, memory_budget); });
  }
  errors.rethrow();
  return out;
}

Thm1Calibration calibrate_thm1(const Constants& k, u64 x_lo, u64 x_hi) {
  if (x_lo < 3 || x_hi < x_lo) throw DomainError("calibrate_thm1: requires 3 <= x_lo <= x_hi");
  const SieveTable phi = sieve_range(FunctionKind::totient, 1, x_hi);
  const BoundModel model = huxley_model();
  std::vector<double> ratio(static_cast<std::size_t>(x_hi - x_lo + 1));
  const auto count = static_cast<std::ptrdiff_t>(ratio.size());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1024)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    errors.guard(static_cast<std::size_t>(i), [&] {
      const u64 x = x_lo + static_cast<u64>(i);
      const double s = sum_phi_over_floor_with_table(x, phi).value();
      const double xd = static_cast<double>(x);
      ratio[static_cast<std::size_t>(i)] = std::fabs(s - k.c0.mid() * xd) / model.envelope(xd);
    });
  }
  errors.rethrow();
  Thm1Calibration cal{0, x_lo, x_lo, x_hi};
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (ratio[i] > cal.c_max) {
      cal.c_max = ratio[i];
      cal.argmax = x_lo + i;
    }
  }
  return cal;
}

Thm2Record residual_thm2(u64 x, SumMethod method, std::size_t memory_budget) {
  if (x < 3) throw DomainError("residual_thm2: x must be >= 3");
  Thm2Record r;
  r.x = x;
  r.sum = sum_phi_floor(x, method, memory_budget);
  const long double xl = static_cast<long double>(x);
  r.ratio = static_cast<double>(static_cast<long double>(r.sum) / (xl * std::log(xl)));
  return r;
}

double phi_over_n2_drift(u64 x, std::size_t memory_budget) {
  if (x < 2) throw DomainError("phi_over_n2_drift: x must be >= 2");
  if (x > 3'000'000'000ULL) throw DomainError("phi_over_n2_drift: x too large for exact n^2 terms");
  const auto partials = map_segments<AccurateSum>(
      FunctionKind::totient, 1, x, memory_budget, [](const SegmentView& seg) {
        AccurateSum acc;
        for (u64 n = seg.lo; n <= seg.hi; ++n) acc.add(Rational(seg[n], static_cast<i64>(n * n)));
        return acc;
      });
  AccurateSum total;
  for (const auto& p : partials) total.merge(p);
  const long double lx = std::log(static_cast<long double>(x));
  return static_cast<double>(static_cast<long double>(total.value()) - kInvZeta2 * lx);
}

DivisorRecord divisor_record(u64 x) {
  if (x < 3) throw DomainError("divisor_record: x must be >= 3");
  DivisorRecord r;
  r.x = x;
  r.divisor_sum = divisor_sum(x);
  const long double xl = static_cast<long double>(x);
  r.main_term = static_cast<double>(xl * (std::log(xl) + 2.0L * kEulerGamma - 1.0L));
  r.delta = divisor_delta(x);
  const double xd = static_cast<double>(x);
  r.ratio_sqrt = r.delta / sqrt_model().envelope(xd);
  r.ratio_huxley = r.delta / huxley_model().envelope(xd);
  return r;
}

// -- identity checks ----------------------------------------------------------------

DecompositionCheck s_star_decomposition_check(u64 x, u64 exact_cap) {
  if (x < 3 || x > 100'000) throw DomainError("s_star_decomposition_check: requires 3 <= x <= 10^5");
  const SieveTable phi = sieve_range(FunctionKind::totient, 1, x);
  DecompositionCheck c;
  c.x = x;
  c.d_max = static_cast<u64>(static_cast<u128>(x) * kAdmissibleC.num() / kAdmissibleC.den());
  const u64 head_end = x / (c.d_max + 1);
  c.head_terms = head_end;

  auto quotient_term = [&](u64 n) {
    const u64 v = x / n;
    return Rational(phi[v], static_cast<i64>(v));
  };
  const bool exact = x <= exact_cap;
  BigRational exact_direct = 0;
  BigRational exact_decomposed = 0;

  AccurateSum direct;
  for (u64 n = 1; n <= x; ++n) {
    const Rational t = quotient_term(n);
    direct.add(t);
    if (exact) exact_direct += to_big(t);
  }

  AccurateSum decomposed;
  for (u64 n = 1; n <= head_end; ++n) {
    const Rational t = quotient_term(n);
    decomposed.add(t);
    if (exact) exact_decomposed += to_big(t);
  }
  const i64 xi = static_cast<i64>(x);
  for (u64 d = 1; d <= c.d_max; ++d) {
    const i64 di = static_cast<i64>(d);
    const Rational weight(phi[d], di);
    const Rational main = Rational::from_wide(static_cast<i128>(phi[d]) * xi, static_cast<i128>(di) * di * (di + 1));
    const Rational up = weight * psi_rational(x, d + 1);
    const Rational down = -(weight * psi_rational(x, d));
    decomposed.add(main);
    decomposed.add(up);
    decomposed.add(down);
    if (exact) exact_decomposed += to_big(main) + to_big(up) + to_big(down);
  }
  c.direct = direct.value();
  c.decomposed = decomposed.value();
  c.difference = std::fabs(c.direct - c.decomposed);
  c.bound = direct.error_bound() + decomposed.error_bound();
  if (exact) c.exact_equal = (exact_direct == exact_decomposed);
  return c;
}

AbelCheck abel_identity_check(u64 x, double d) {
  if (!(5.0 * d >= 972.0)) throw DomainError("abel_identity_check: requires D >= 972/5");
  AbelCheck c;
  c.x = x;
  c.d = d;
  c.upper = static_cast<double>(x) / d;
  if (c.upper > 1e5) throw DomainError("abel_identity_check: requires x/D <= 10^5");
  const u64 top = static_cast<u64>(std::floor(c.upper));
  if (top < 1) return c;  // empty sums and an empty integral

  // Both sides reach ~10^8 in magnitude, so they are carried in extended
  // precision to keep the rounding well under the 1e-9 target.
  const SieveTable phi = sieve_range(FunctionKind::totient, 1, top);
  WideSum lhs;
  WideSum running;   // A(m)
  WideSum integral;  // Σ_{m<top} A(m) + (X - top) A(top)
  long double running_bounds = 0;
  for (u64 m = 1; m <= top; ++m) {
    const Rational b = psi_rational(x, m + 1) - psi_rational(x, m);
    lhs.add(wide_value(Rational(phi[m]) * b));
    running.add(wide_value(Rational(phi[m], static_cast<i64>(m)) * b));
    if (m < top) {
      integral.add(running.value());
      running_bounds += running.error_bound() + kUL * std::fabs(running.value());
    }
  }
  const long double upper = static_cast<long double>(x) / static_cast<long double>(d);
  const long double a_top = running.value();
  integral.add((upper - static_cast<long double>(top)) * a_top);
  const long double l = lhs.value();
  const long double r = upper * a_top - integral.value();
  c.lhs = static_cast<double>(l);
  c.rhs = static_cast<double>(r);
  c.difference = static_cast<double>(std::fabs(l - r));
  const long double a_err = running.error_bound() + kUL * std::fabs(a_top);
  const long double bound = lhs.error_bound() + integral.error_bound() + running_bounds + (upper + 1) * a_err +
                            4 * kUL * (std::fabs(upper * a_top) + integral.abs_mass() + std::fabs(l));
  // X itself is x/D rounded in both precisions; its effect enters through A(top).
  c.bound = static_cast<double>(bound + 2 * kU * std::fabs(upper * a_top));
  return c;
}

// -- fitting ------------------------------------------------------------------------

FitResult fit_log_log(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("fit: x and y lengths differ");
  std::vector<long double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double y = std::fabs(ys[i]);
    if (!(y > 0) || !std::isfinite(y) || !(xs[i] > 0)) continue;
    lx.push_back(std::log(static_cast<long double>(xs[i])));
    ly.push_back(std::log(static_cast<long double>(y)));
  }
  if (lx.size() < 5) throw DomainError("fit: need at least 5 points with nonzero residual");
  const long double n = static_cast<long double>(lx.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0) throw DomainError("fit: all x values coincide");
  FitResult f;
  const long double slope = sxy / sxx;
  f.slope = static_cast<double>(slope);
  f.intercept = static_cast<double>(my - slope * mx);
  f.r_squared = syy == 0 ? 1.0 : static_cast<double>(sxy * sxy / (sxx * syy));
  f.points_used = lx.size();
  return f;
}

FitResult fit_exponent(std::span<const ResidualRecord> records) {
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    xs.push_back(static_cast<double>(r.x));
    ys.push_back(r.residual);
  }
  return fit_log_log(xs, ys);
}

// -- split point ----------------------------------------------------------------

namespace {

double split_value(u64 x) {
  const double lx = std::log(static_cast<double>(x));
  return std::exp(131.0 / 416.0 * lx + 26947.0 / 8320.0 * std::log(lx));
}

u64 split_threshold() {
  // D is increasing for x >= 3; bisect for the first x with 5·D >= 972.
  u64 lo = 3, hi = u64{1} << 40;
  while (lo < hi) {
    const u64 mid = lo + (hi - lo) / 2;
    if (5.0 * split_value(mid) >= 972.0) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

SplitChoice choose_D(u64 x) {
  if (x < 3) throw DomainError("choose_D: x must be >= 3");
  static const u64 threshold = split_threshold();
  SplitChoice c;
  c.d = split_value(x);
  c.threshold = threshold;
  c.admissible = 5.0 * c.d >= 972.0;
  return c;
}

std::vector<u64> geometric_grid(u64 x_min, u64 x_max, double ratio) {
  if (!(ratio > 1.0)) throw DomainError("geometric grid: ratio must exceed 1");
  if (x_min < 1 || x_max < x_min) throw DomainError("geometric grid: requires 1 <= x_min <= x_max");
  std::vector<u64> grid;
  for (int k = 0;; ++k) {
    const long double v = static_cast<long double>(x_min) * std::pow(static_cast<long double>(ratio), k);
    if (v > static_cast<long double>(x_max) + 0.5L) break;
    const u64 x = static_cast<u64>(std::llround(v));
    if (x > x_max) break;
    if (grid.empty() || grid.back() != x) grid.push_back(x);
  }
  if (grid.back() != x_max) grid.push_back(x_max);
  return grid;
}

}  // namespace phifloor

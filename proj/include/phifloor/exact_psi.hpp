#pragma once

// Exact sawtooth values at rational points and a compensated accumulator
// that carries a rigorous bound on its own rounding error.

#include <cstdint>
#include <limits>
#include <string>

#include "phifloor/int_math.hpp"

namespace phifloor {

/// Reduced fraction num/den with den >= 1, both within signed 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(i64 num, i64 den = 1);

  /// Reduces an 128-bit fraction, throwing ArithmeticError if the reduced
  /// form does not fit.
  static Rational from_wide(i128 num, i128 den);

  i64 num() const { return num_; }
  i64 den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational::from_wide(-static_cast<i128>(num_), den_); }

 private:
  i64 num_{0};
  i64 den_{1};
};

/// ψ(p/q) = (p mod q)/q - 1/2, exactly. Throws DomainError for q = 0.
Rational psi_rational(u64 p, u64 q);

/// Neumaier-compensated sum with a running mass Σ|t|.
///
/// Terms added as doubles are taken as exact; rational terms are rounded once
/// on conversion. In both cases
///     |value() - exact| <= error_bound() = K * u * abs_mass(),  K = 4,
/// where u = 2^-53, as long as term_count() <= 2^40.
class AccurateSum {
 public:
  static constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;
  static constexpr double kErrorConstant = 4.0;

  void add(double t);
  void add(const Rational& t) { add(t.to_double()); }

  /// Folds another partial in; callers merge partials in a fixed order.
  void merge(const AccurateSum& other);

  double value() const { return sum_ + compensation_; }
  double compensation() const { return compensation_; }
  double abs_mass() const { return abs_mass_; }
  std::uint64_t term_count() const { return count_; }
  double error_bound() const { return kErrorConstant * kUnitRoundoff * abs_mass_; }

 private:
  double sum_{0.0};
  double compensation_{0.0};
  double abs_mass_{0.0};
  std::uint64_t count_{0};
};

/// Value-semantics form of AccurateSum::add.
inline AccurateSum accumulate(AccurateSum acc, const Rational& t) {
  acc.add(t);
  return acc;
}

inline AccurateSum accumulate(AccurateSum acc, double t) {
  acc.add(t);
  return acc;
}

}  // namespace phifloor

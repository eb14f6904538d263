#include "phifloor/exact_psi.hpp"

#include <cmath>
#include <numeric>

namespace phifloor {

namespace {

u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(i64 num, i64 den) {
  if (den == 0) throw DomainError("Rational: zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(i128 num, i128 den) {
  if (den == 0) throw DomainError("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const u128 an = abs128(num);
  const u128 ad = static_cast<u128>(den);
  const u128 g = (an >> 64 == 0 && ad >> 64 == 0)
                     ? u128{std::gcd(static_cast<u64>(an), static_cast<u64>(ad))}
                     : gcd128(an, ad);
  if (g > 1) {
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
  }
  Rational r;
  r.num_ = narrow_i64(num, "Rational numerator");
  r.den_ = narrow_i64(den, "Rational denominator");
  return r;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                             static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational psi_rational(u64 p, u64 q) {
  if (q == 0) throw DomainError("psi_rational: q must be >= 1");
  const u64 r = p % q;
  // (r/q) - 1/2 = (2r - q) / (2q)
  return Rational::from_wide(2 * static_cast<i128>(r) - static_cast<i128>(q), 2 * static_cast<i128>(q));
}

void AccurateSum::add(double t) {
  const double s = sum_ + t;
  if (std::fabs(sum_) >= std::fabs(t)) {
    compensation_ += (sum_ - s) + t;
  } else {
    compensation_ += (t - s) + sum_;
  }
  sum_ = s;
  abs_mass_ += std::fabs(t);
  ++count_;
}

void AccurateSum::merge(const AccurateSum& other) {
  const double s = sum_ + other.sum_;
  if (std::fabs(sum_) >= std::fabs(other.sum_)) {
    compensation_ += (sum_ - s) + other.sum_;
  } else {
    compensation_ += (other.sum_ - s) + sum_;
  }
  compensation_ += other.compensation_;
  sum_ = s;
  abs_mass_ += other.abs_mass_;
  count_ += other.count_;
}

}  // namespace phifloor

#pragma once

namespace phifloor {

// Euler-Mascheroni constant to 30 significant digits (OEIS A001620).
inline constexpr long double kEulerGamma = 0.577215664901532860606512090082L;

inline constexpr long double kPi = 3.14159265358979323846264338328L;

// ζ(2) = π²/6 and its reciprocal 6/π².
inline constexpr long double kZeta2 = kPi * kPi / 6.0L;
inline constexpr long double kInvZeta2 = 6.0L / (kPi * kPi);

}  // namespace phifloor

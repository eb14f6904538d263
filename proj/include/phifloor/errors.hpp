#pragma once

#include <stdexcept>
#include <string>

namespace phifloor {

/// A precondition on the arguments was violated (q = 0, N > x, D < 1/C, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested computation does not fit the configured memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact integer path would have overflowed its working width.
class ArithmeticError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace phifloor

#pragma once

// Exceptions must not escape an OpenMP region. Loop bodies run through
// ParallelErrors::guard; after the region, rethrow() raises the exception of
// the lowest failing index, so the reported error is independent of the
// thread count.

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

namespace phifloor {

class ParallelErrors {
 public:
  template <class Fn>
  void guard(std::size_t index, Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      const std::lock_guard lock(mutex_);
      if (index < index_) {
        index_ = index;
        error_ = std::current_exception();
      }
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::size_t index_{std::numeric_limits<std::size_t>::max()};
  std::exception_ptr error_;
};

}  // namespace phifloor

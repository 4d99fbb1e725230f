#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

namespace mirl::detail {

/// Runs fn(i) for i in [0, n), in parallel when OpenMP is available. If any
/// call throws, the exception from the lowest index is rethrown, so the
/// reported error does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::exception_ptr error;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(mirl_parallel_for_error)
      {
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mirl::detail

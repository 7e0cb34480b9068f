#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tosi {

/// Selects between the OpenMP kernel and the serial reference loop. Both
/// produce bitwise-identical results; the serial path is kept for testing
/// and benchmarking.
enum class Execution { serial, parallel };

/// Number of worker threads OpenMP would use for a parallel region.
inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

/// Runs body(i) for i in [0, count). Each iteration must write only to its
/// own output slot. The first exception (lowest index) is rethrown after
/// the loop so that error reporting does not depend on the schedule.
template <typename Body>
void for_each_index(Execution exec, std::size_t count, Body&& body) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tosi

#pragma once

#include <exception>
#include <mutex>

#include <omp.h>

namespace towercalc {

enum class ExecPolicy { serial, parallel };

/// Runs body(i) for i in [0, n). The parallel policy uses an OpenMP dynamic
/// schedule; the first exception thrown by any iteration is rethrown.
template <class Body>
void for_each_index(ExecPolicy policy, int n, Body&& body) {
  if (policy == ExecPolicy::serial || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace towercalc

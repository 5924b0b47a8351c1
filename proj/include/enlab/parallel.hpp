#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <span>
#include <vector>

#include <omp.h>

namespace enlab {

enum class Execution { serial, parallel };

/// Thread count from ENLAB_THREADS, else the OpenMP default.
inline int thread_count() {
  if (const char* env = std::getenv("ENLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return omp_get_max_threads();
}

/// Calls body(i) for i in [0, n). Results must be written to per-index slots so
/// the outcome does not depend on scheduling. The first exception (lowest index)
/// is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Pairwise summation in a fixed tree order.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0;
    for (double v : x) s += v;
    return s;
  }
  const auto half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace enlab

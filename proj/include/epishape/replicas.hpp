#pragma once

// Replica-level parallelism. Each replica is a pure function of its index, and
// results are stored by index, so output does not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace epishape {

/// 0 = use the OpenMP default (all available cores).
struct Parallelism {
  int jobs = 0;
};

int effective_jobs(Parallelism p);

/// Serial reference: fn(0), fn(1), ... in order.
template <class Fn>
auto map_replicas_serial(std::size_t count, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) out.push_back(fn(r));
  return out;
}

/// Same results as map_replicas_serial, computed on `jobs` OpenMP threads.
/// The first exception by replica index is rethrown after the loop.
template <class Fn>
auto map_replicas(std::size_t count, Fn&& fn, Parallelism par = {}) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  static_assert(!std::is_same_v<R, bool>, "vector<bool> elements cannot be written concurrently");
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::int64_t>(count);
  const int jobs = effective_jobs(par);
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::int64_t r = 0; r < n; ++r) {
    try {
      out[static_cast<std::size_t>(r)] = fn(static_cast<std::size_t>(r));
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

inline int effective_jobs(Parallelism p) {
  if (p.jobs > 0) return p.jobs;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace epishape

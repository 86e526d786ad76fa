// OpenMP kernel for the Req loop. The serial loop in oracle.cpp is the
// reference; this one must report the same (minimal-index) violation.

#include <atomic>
#include <exception>

#include "oracle_internal.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace varkit {

std::optional<Violation> Oracle::req_parallel(const Prepared& p) {
#ifndef _OPENMP
  return req_serial(p);
#else
  const auto total = static_cast<long long>(p.work);
  std::atomic<long long> best{total};
  std::optional<Violation> result;
  std::exception_ptr error;

#pragma omp parallel
  {
    // Each thread works on a private copy of the engine, memo tables and
    // universe. Types are exchanged as expressions, never as ids.
    Oracle local(*this);
    local.req_passed_.clear();
#pragma omp for schedule(dynamic, 64)
    for (long long i = 0; i < total; ++i) {
      if (i >= best.load(std::memory_order_relaxed)) continue;
      try {
        if (auto v = local.req_at(p, static_cast<std::size_t>(i))) {
#pragma omp critical(varkit_req_result)
          {
            if (i < best.load()) {
              best.store(i);
              result = std::move(v);
            }
          }
        }
      } catch (...) {
#pragma omp critical(varkit_req_error)
        if (!error) error = std::current_exception();
        best.store(-1);
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return result;
#endif
}

}  // namespace varkit

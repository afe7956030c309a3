#include "vvc/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef VVC_HAVE_OPENMP
#include <omp.h>
#endif

namespace vvc::par {

namespace {
std::atomic<int> g_enabled{-1};  // -1 unset, 0 off, 1 on

bool default_enabled() {
#ifdef VVC_HAVE_OPENMP
  if (const char* env = std::getenv("VVC_SERIAL")) {
    if (env[0] == '1') return false;
  }
  return true;
#else
  return false;
#endif
}
}  // namespace

bool enabled() {
  int v = g_enabled.load(std::memory_order_relaxed);
  if (v < 0) {
    v = default_enabled() ? 1 : 0;
    g_enabled.store(v, std::memory_order_relaxed);
  }
  return v == 1;
}

void set_enabled(bool on) { g_enabled.store(on ? 1 : 0, std::memory_order_relaxed); }

int thread_count() {
#ifdef VVC_HAVE_OPENMP
  return enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

namespace detail {
void run_indexed(std::size_t n, void (*fn)(std::size_t, void*), void* ctx, bool parallel) {
#ifdef VVC_HAVE_OPENMP
  if (parallel) {
    #pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i), ctx);
    }
    return;
  }
#else
  (void)parallel;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i, ctx);
}
}  // namespace detail

}  // namespace vvc::par

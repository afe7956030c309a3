#pragma once

#include <cstddef>
#include <memory>
#include <type_traits>

namespace vvc::par {

// Runtime switch for the OpenMP kernels.  Every parallel kernel in this
// project is an index-fill (each iteration writes its own slot), so serial
// and parallel execution produce bit-identical results.
bool enabled();
void set_enabled(bool on);
int thread_count();

namespace detail {
void run_indexed(std::size_t n, void (*fn)(std::size_t, void*), void* ctx, bool parallel);
}

template <class F>
void for_index(std::size_t n, F&& f) {
  using Fn = std::remove_reference_t<F>;
  auto thunk = [](std::size_t i, void* ctx) { (*static_cast<Fn*>(ctx))(i); };
  detail::run_indexed(n, thunk, static_cast<void*>(std::addressof(f)), enabled());
}

// Serial reference path, kept distinct so tests/benchmarks can compare.
template <class F>
void for_index_serial(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace vvc::par

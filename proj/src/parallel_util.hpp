#pragma once

#include <exception>
#include <thread>
#include <vector>

#include "rectri/common.hpp"

namespace rectri::detail {

// Fork-join over [0, count) split into contiguous chunks, one per worker.
// fn(begin, end) must be safe to run concurrently on disjoint ranges.
template <typename Fn>
void parallel_chunks(index_t count, int width, const Fn& fn) {
  const int workers = static_cast<int>(
      std::min<index_t>(width < 1 ? 1 : width, count < 1 ? 1 : count));
  if (workers <= 1) {
    fn(index_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) {
    const index_t b = count * w / workers;
    const index_t e = count * (w + 1) / workers;
    pool.emplace_back([&, w, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  try {
    fn(index_t{0}, count / workers);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace rectri::detail

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ranklash {

// Worker count: the explicit request, or the hardware concurrency when it
// is 0, capped by RANKLASH_THREADS when that is set to a positive value.
inline unsigned worker_count(unsigned requested = 0) {
  unsigned n = requested > 0
                   ? requested
                   : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RANKLASH_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // not a number: no cap
    }
  }
  return n;
}

// Calls body(begin, end) on contiguous blocks of [0, n). Results must be
// written to per-index slots so the outcome does not depend on scheduling.
template <class Body>
void parallel_for_blocks(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ranklash

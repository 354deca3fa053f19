#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qlh {

/// Worker count: `requested` if positive, else $QLH_THREADS, else 1.
int resolve_threads(int requested);

/// Calls fn(begin, end) over [0, count) split into fixed-size blocks. Block
/// boundaries do not depend on the worker count.
template <class Fn>
void parallel_blocks(std::size_t count, std::size_t block, int threads, Fn&& fn) {
  if (count == 0) return;
  block = std::max<std::size_t>(block, 1);
  const std::size_t nblocks = (count + block - 1) / block;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), nblocks);
  auto run = [&](std::size_t w) {
    for (std::size_t b = w; b < nblocks; b += workers) {
      const std::size_t begin = b * block;
      fn(begin, std::min(count, begin + block));
    }
  };
  if (workers <= 1) {
    run(0);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        run(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace qlh

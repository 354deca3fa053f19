#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qlh/error.hpp"
#include "qlh/parallel.hpp"
#include "qlh/stats.hpp"

namespace qlh {

inline constexpr std::size_t kMonteCarloBlock = 4096;

/// Mean and standard error of fn(index) over index in [0, samples). Blocks
/// are reduced in index order, so the result is independent of `threads`.
template <class Fn>
MeanStderr monte_carlo(std::size_t samples, int threads, Fn&& fn) {
  if (samples < 1) throw ValidationError("samples must be at least 1");
  const std::size_t nblocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<Moments> blocks(nblocks);
  parallel_blocks(samples, kMonteCarloBlock, resolve_threads(threads),
                  [&](std::size_t begin, std::size_t end) {
    std::vector<double> xs(end - begin);
    for (std::size_t s = begin; s < end; ++s) xs[s - begin] = fn(static_cast<std::uint64_t>(s));
    blocks[begin / kMonteCarloBlock] = moments_of(xs);
  });
  Moments total;
  for (const auto& b : blocks) total = merge(total, b);
  return finish(total);
}

}  // namespace qlh

#pragma once

#include <cstddef>
#include <span>

namespace qlh {

/// Pairwise (cascade) summation; result depends only on element order.
double pairwise_sum(std::span<const double> xs) noexcept;

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

/// Sample mean, sample standard deviation (n-1), and std/sqrt(n).
MeanStderr summarize(std::span<const double> xs);

/// Count, mean and sum of squared deviations of one chunk of samples.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments moments_of(std::span<const double> xs);
/// Chan et al. pairwise update; merging chunks in a fixed order gives
/// results that do not depend on how the chunks were computed.
Moments merge(const Moments& a, const Moments& b) noexcept;
MeanStderr finish(const Moments& m) noexcept;

}  // namespace qlh

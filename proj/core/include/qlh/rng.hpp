#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace qlh {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based generator. The output sequence is a pure function of
/// (seed, stream, substream); there is no shared state, so sample `s` of a
/// Monte Carlo run draws the same numbers regardless of which worker runs it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream,
             std::uint64_t substream = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  Eigen::VectorXd normal_vector(Eigen::Index d);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qlh

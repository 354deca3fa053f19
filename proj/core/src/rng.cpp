#include "qlh/rng.hpp"

#include <cmath>
#include <numbers>

namespace qlh {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t substream) noexcept
    : key_(mix64(seed ^ mix64(stream ^ mix64(substream ^ 0xD1B54A32D192ED03ull)))) {}

std::uint64_t CounterRng::next_u64() noexcept {
  return mix64(key_ + (++counter_) * kGolden);
}

double CounterRng::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd CounterRng::normal_vector(Eigen::Index d) {
  Eigen::VectorXd out(d);
  for (Eigen::Index i = 0; i < d; ++i) out[i] = normal();
  return out;
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  // Lemire's multiply-shift; the tiny bias is irrelevant for index picks.
  __extension__ using u128 = unsigned __int128;
  const u128 m = static_cast<u128>(next_u64()) * bound;
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace qlh

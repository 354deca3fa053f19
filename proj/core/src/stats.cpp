#include "qlh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qlh {

double pairwise_sum(std::span<const double> xs) noexcept {
  constexpr std::size_t kLeaf = 16;
  if (xs.size() <= kLeaf) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

Moments moments_of(std::span<const double> xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  m.mean = pairwise_sum(xs) / static_cast<double>(xs.size());
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - m.mean;
    sq[i] = d * d;
  }
  m.m2 = pairwise_sum(sq);
  return m;
}

Moments merge(const Moments& a, const Moments& b) noexcept {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  Moments out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * (nb / n);
  out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
  return out;
}

MeanStderr finish(const Moments& m) noexcept {
  MeanStderr out;
  out.count = m.count;
  out.mean = m.mean;
  if (m.count > 1) {
    out.stddev = std::sqrt(std::max(0.0, m.m2) / static_cast<double>(m.count - 1));
    out.std_error = out.stddev / std::sqrt(static_cast<double>(m.count));
  }
  return out;
}

MeanStderr summarize(std::span<const double> xs) { return finish(moments_of(xs)); }

}  // namespace qlh

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "qlh/montecarlo.hpp"
#include "qlh/parallel.hpp"
#include "qlh/rng.hpp"
#include "qlh/stats.hpp"

using namespace qlh;

TEST_CASE("counter rng is a pure function of seed, stream and substream") {
  CounterRng a(42, 7, 3), b(42, 7, 3), c(42, 7, 4), d(43, 7, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
}

TEST_CASE("uniform stays in the open unit interval and normals have unit variance") {
  CounterRng rng(1, 2);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("below is uniform over its range") {
  CounterRng rng(9, 9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("chunked moments merge to the single-pass values") {
  std::vector<double> xs(10007);
  CounterRng rng(5, 5);
  for (double& x : xs) x = rng.normal() * 3 + 1;
  const MeanStderr whole = summarize(xs);
  Moments m;
  for (std::size_t b = 0; b < xs.size(); b += 1000) {
    const std::size_t e = std::min(xs.size(), b + 1000);
    m = merge(m, moments_of(std::span<const double>(xs).subspan(b, e - b)));
  }
  const MeanStderr merged = finish(m);
  CHECK(merged.count == whole.count);
  CHECK(merged.mean == doctest::Approx(whole.mean).epsilon(1e-12));
  CHECK(merged.stddev == doctest::Approx(whole.stddev).epsilon(1e-12));

  double naive = 0, sq = 0;
  for (double x : xs) naive += x;
  naive /= xs.size();
  for (double x : xs) sq += (x - naive) * (x - naive);
  CHECK(whole.mean == doctest::Approx(naive).epsilon(1e-12));
  CHECK(whole.stddev == doctest::Approx(std::sqrt(sq / (xs.size() - 1))).epsilon(1e-12));
}

TEST_CASE("parallel blocks cover the range once with worker-independent boundaries") {
  for (int threads : {1, 2, 5}) {
    std::vector<int> hits(1003, 0);
    std::vector<std::pair<std::size_t, std::size_t>> seen(11);
    parallel_blocks(1003, 100, threads, [&](std::size_t b, std::size_t e) {
      seen[b / 100] = {b, e};
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) CHECK(h == 1);
    for (std::size_t k = 0; k < seen.size(); ++k) {
      CHECK(seen[k].first == k * 100);
      CHECK(seen[k].second == std::min<std::size_t>(1003, k * 100 + 100));
    }
  }
}

TEST_CASE("monte carlo estimates are bit-identical across worker counts") {
  auto f = [](std::uint64_t s) {
    CounterRng r(11, 0, s);
    return std::exp(r.normal());
  };
  const MeanStderr one = monte_carlo(50000, 1, f);
  const MeanStderr four = monte_carlo(50000, 4, f);
  CHECK(one.mean == four.mean);
  CHECK(one.std_error == four.std_error);
  // E[exp(z)] = exp(1/2).
  CHECK(std::abs(one.mean - std::exp(0.5)) < 4 * one.std_error);
}

TEST_CASE("worker errors propagate") {
  CHECK_THROWS(parallel_blocks(10, 1, 3, [](std::size_t b, std::size_t) {
    if (b == 7) throw std::runtime_error("boom");
  }));
}

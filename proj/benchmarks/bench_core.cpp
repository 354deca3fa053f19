#include <benchmark/benchmark.h>

#include "qlh/certify.hpp"
#include "qlh/exact.hpp"
#include "qlh/hermite.hpp"
#include "qlh/rounding.hpp"
#include "qlh/sdp.hpp"

using namespace qlh;

static void BM_LambdaMax(benchmark::State& st) {
  const Instance inst = pauli::random_projector_instance(2, static_cast<int>(st.range(0)), 20, 1);
  exact::LambdaOptions o;
  o.want_vector = false;
  for (auto _ : st) benchmark::DoNotOptimize(exact::lambda_max(inst, o).lambda_max);
}
BENCHMARK(BM_LambdaMax)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MomentRelaxation(benchmark::State& st) {
  const Instance inst = pauli::random_projector_instance(1, static_cast<int>(st.range(0)), 10, 2);
  const conic::ConicProgram p = sdp::build_moment_relaxation(inst);
  for (auto _ : st) benchmark::DoNotOptimize(sdp::solve(p).objective);
}
BENCHMARK(BM_MomentRelaxation)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_Rounding(benchmark::State& st) {
  const Instance inst = pauli::random_projector_instance(2, 6, 10, 3);
  const sdp::GramVectors g = sdp::gram_vectors(sdp::solve(sdp::build_moment_relaxation(inst)));
  for (auto _ : st)
    benchmark::DoNotOptimize(rounding::estimate_energy(inst, g, 10000, 4).energy.mean);
  st.SetItemsProcessed(st.iterations() * 10000);
}
BENCHMARK(BM_Rounding)->Unit(benchmark::kMillisecond);

static void BM_Quadrature(benchmark::State& st) {
  double a = -0.3;
  for (auto _ : st) {
    benchmark::DoNotOptimize(hermite::quad_components_quadrature(a, 0.2, 0.5));
    a = a > 0.9 ? -0.9 : a + 0.01;
  }
}
BENCHMARK(BM_Quadrature);

static void BM_CertifyGrid(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(hermite::certify_bounds_quadratic(1, static_cast<int>(st.range(0)), 0, 1).certified_min);
}
BENCHMARK(BM_CertifyGrid)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

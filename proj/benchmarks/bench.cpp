#include <benchmark/benchmark.h>

#include "wloc/experiments.hpp"
#include "wloc/frames.hpp"
#include "wloc/geometry.hpp"
#include "wloc/localization.hpp"
#include "wloc/operators.hpp"

namespace {

std::shared_ptr<const wloc::SampledDomain> euclidean_domain(double res,
                                                            double trunc) {
  return std::make_shared<const wloc::SampledDomain>(wloc::sample_grid(
      wloc::MetricMeasureSpace::euclidean2d(), res, trunc));
}

void BM_GaborGram(benchmark::State& state) {
  const auto domain = euclidean_domain(0.5, state.range(0));
  const auto frame = std::make_shared<wloc::SampledFrame>(
      wloc::gabor_gaussian_frame(domain));
  for (auto _ : state) {
    wloc::SampledFrame fresh = wloc::gabor_gaussian_frame(domain);
    benchmark::DoNotOptimize(fresh.gram().norm());
  }
  state.SetComplexityN(domain->size());
}
BENCHMARK(BM_GaborGram)->Arg(2)->Arg(3)->Arg(4)->Complexity();

void BM_BuildCover(benchmark::State& state) {
  const auto domain = euclidean_domain(0.1, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wloc::build_cover(*domain, state.range(0) / 4.0));
  }
}
BENCHMARK(BM_BuildCover)->Arg(2)->Arg(4)->Arg(8);

void BM_SchurMargins(benchmark::State& state) {
  const auto domain = euclidean_domain(0.25, state.range(0));
  const auto frame = wloc::gabor_gaussian_frame(domain);
  const wloc::KernelMatrix K = wloc::kernel_matrix(frame);
  const wloc::Weight p = wloc::Weight::constant();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wloc::schur_margins(K, p));
  }
}
BENCHMARK(BM_SchurMargins)->Arg(3)->Arg(4)->Arg(5);

void BM_OperatorNorm(benchmark::State& state) {
  const auto domain = euclidean_domain(0.25, 4.0);
  const auto frame = std::make_shared<const wloc::SampledFrame>(
      wloc::gabor_gaussian_frame(domain));
  const auto dual =
      std::make_shared<const wloc::DualFrame>(wloc::canonical_dual(frame));
  const wloc::LocalizedOperator T = wloc::multiplier(
      dual, wloc::make_symbol(wloc::Space::Euclidean2D, "square:1"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wloc::operator_norm(T, state.range(0)));
  }
}
BENCHMARK(BM_OperatorNorm)->Arg(2000)->Arg(100);

}  // namespace

BENCHMARK_MAIN();

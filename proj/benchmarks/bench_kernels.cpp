#include "hwip/holder.hpp"
#include "hwip/models.hpp"
#include "hwip/rng.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

hwip::PolygonalPath gaussian_path(std::size_t n) {
  hwip::ProcessModel model;
  return hwip::PolygonalPath::from_increments(hwip::sample_model(model, n, 7));
}

constexpr double kAlpha = 0.5 - 1.0 / 3.0;

void BM_HolderExact(benchmark::State& state) {
  const auto path = gaussian_path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hwip::holder_max_exact(path, kAlpha).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HolderExact)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_HolderWindowed(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto path = gaussian_path(n);
  const auto lag = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  for (auto _ : state) benchmark::DoNotOptimize(hwip::holder_max_windowed(path, kAlpha, lag).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HolderWindowed)->RangeMultiplier(4)->Range(256, 262144);

void BM_HolderPrefixes(benchmark::State& state) {
  const auto path = gaussian_path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hwip::holder_max_prefixes(path, kAlpha).back());
}
BENCHMARK(BM_HolderPrefixes)->RangeMultiplier(4)->Range(256, 4096);

void BM_DyadicBounds(benchmark::State& state) {
  const auto path = gaussian_path(static_cast<std::size_t>(state.range(0)));
  const auto x = path.increments();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hwip::dyadic_lower(path, kAlpha).value);
    benchmark::DoNotOptimize(hwip::dyadic_upper(x, kAlpha).value);
  }
}
BENCHMARK(BM_DyadicBounds)->RangeMultiplier(8)->Range(512, 262144);

void BM_Sample(benchmark::State& state, hwip::ProcessModel model) {
  hwip::Philox rng(7, 1);
  std::vector<double> x;
  for (auto _ : state) {
    hwip::sample_model(model, 65536, rng, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * 65536);
}

hwip::ProcessModel kind(const char* name) {
  hwip::ProcessModel m;
  m.kind = hwip::parse_model_kind(name);
  if (m.kind == hwip::ModelKind::linear_process) m.coefficients = {1.0, 0.5, 0.25};
  if (m.kind == hwip::ModelKind::renewal_chain) {
    m.p = 3.0;
    m.chain = hwip::build_renewal_chain(3.0, 4);
  }
  return m;
}

BENCHMARK_CAPTURE(BM_Sample, iid, kind("iid"));
BENCHMARK_CAPTURE(BM_Sample, linear_process, kind("linear_process"));
BENCHMARK_CAPTURE(BM_Sample, martingale_difference, kind("martingale_difference"));
BENCHMARK_CAPTURE(BM_Sample, renewal_chain, kind("renewal_chain"));

}  // namespace
BENCHMARK_MAIN();

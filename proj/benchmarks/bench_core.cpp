#include <benchmark/benchmark.h>

#include <vector>

#include "profscreen/experiment.hpp"
#include "profscreen/model_selection.hpp"
#include "profscreen/screening.hpp"
#include "profscreen/simgen.hpp"

using namespace profscreen;

namespace {

struct Fixture {
  DesignMatrix x;
  ResponseVector y;
  ThinSvd svd;
};

Fixture make_fixture(Index n, Index p) {
  SimulationSpec spec;
  spec.example = ExampleId::Ex4;
  spec.n = n;
  spec.p = p;
  spec.m_spike = static_cast<int>(n / 5);
  const auto ds = DatasetGenerator(spec).generate(11);
  Fixture f{standardize_columns(ds.x_raw), center_response(ds.y_raw), {}};
  f.svd = thin_svd(f.x);
  return f;
}

}  // namespace

static void BM_ThinSvd(benchmark::State& state) {
  const auto f = make_fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(thin_svd(f.x));
}
BENCHMARK(BM_ThinSvd)->Args({100, 1000})->Args({300, 1000})->Unit(benchmark::kMillisecond);

static void BM_ProfileTppis(benchmark::State& state) {
  const auto f = make_fixture(state.range(0), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(profile_tppis(f.x, f.y, f.svd, 3, 0.6));
}
BENCHMARK(BM_ProfileTppis)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_SelectK(benchmark::State& state) {
  const auto f = make_fixture(state.range(0), 1000);
  const auto pd = profile_ppis(f.x, f.y, f.svd, 3);
  const auto scores = importance_scores(pd);
  for (auto _ : state) benchmark::DoNotOptimize(select_k(pd, scores, f.y, f.x, f.x.n() - 2));
}
BENCHMARK(BM_SelectK)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_GridSearch(benchmark::State& state) {
  const auto f = make_fixture(100, 1000);
  const auto method = static_cast<Method>(state.range(0));
  const auto d_grid = default_d_grid(f.x.n(), kDefaultFractions, eigen_ratio_d(f.svd.mu));
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_search(method, f.x, f.y, f.svd, d_grid, kDefaultAlphas));
  }
}
BENCHMARK(BM_GridSearch)
    ->Arg(static_cast<int>(Method::Ppis))
    ->Arg(static_cast<int>(Method::FpsisBic))
    ->Arg(static_cast<int>(Method::Tppis))
    ->Unit(benchmark::kMillisecond);

static void BM_Generate(benchmark::State& state) {
  SimulationSpec spec;
  spec.example = static_cast<ExampleId>(state.range(0));
  spec.phi = 0.9;
  const DatasetGenerator gen(spec);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen.generate(seed++));
}
BENCHMARK(BM_Generate)->Arg(1)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

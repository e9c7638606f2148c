#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "misreport/distributions.hpp"
#include "misreport/model_binary.hpp"

using namespace misreport;

static void BM_PolyaGammaExact(benchmark::State& state) {
  RandomStream rng(1);
  const double b = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_polya_gamma({b, 1.5}, rng));
}
BENCHMARK(BM_PolyaGammaExact)->Arg(5)->Arg(10)->Arg(27);

static void BM_PolyaGammaSeries(benchmark::State& state) {
  RandomStream rng(2);
  PolyaGammaOptions opt;
  opt.method = PolyaGammaMethod::TruncatedSeries;
  for (auto _ : state) benchmark::DoNotOptimize(sample_polya_gamma({1.0, 1.5}, rng, opt));
}
BENCHMARK(BM_PolyaGammaSeries);

static void BM_TruncatedBeta(benchmark::State& state) {
  RandomStream rng(3);
  const double a = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_truncated_beta_half({a, 0.3 * a}, rng));
}
BENCHMARK(BM_TruncatedBeta)->Arg(2)->Arg(50)->Arg(800);

static void BM_BinaryGibbsSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 eng(4);
  std::normal_distribution<double> normal;
  DesignMatrix x;
  x.matrix.resize(n, 5);
  x.column_names = {"x0", "x1", "x2", "x3", "x4"};
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 5; ++j) x.matrix(i, j) = normal(eng);
    y[i] = normal(eng) > 0.3 ? 1 : 0;
  }
  const auto w = scale_weights(std::vector<double>(n, 1.0));
  FitConfig cfg;
  cfg.iterations = 100;
  cfg.burn_in = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gibbs_fit_binary(y, x, w, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_BinaryGibbsSweep)->Arg(800)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

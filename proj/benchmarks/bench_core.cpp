#include <benchmark/benchmark.h>

#include "qimage/qimage.hpp"

using namespace qimage;

static void BM_ContinuumDark(benchmark::State& state) {
  const DarkSolitonParams p{100.0, 0.3, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(fisher_poisson_continuum(p).F);
}
BENCHMARK(BM_ContinuumDark);

static void BM_ContinuumVortex(benchmark::State& state) {
  const VortexParams p{10.0, 1.0, 0.0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(fisher_poisson_continuum(p).F);
}
BENCHMARK(BM_ContinuumVortex);

static void BM_PixelPoisson(benchmark::State& state) {
  const DarkSolitonParams p{100.0, 0.0, 0.0};
  const PixelGrid grid = PixelGrid::from_half_length(0.05, 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(fisher_pixelized_poisson(p, grid, 0.1).F);
}
BENCHMARK(BM_PixelPoisson);

static void BM_Wavenumbers(benchmark::State& state) {
  const int pairs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_wavenumbers(10.0, pairs).wavenumber(pairs));
}
BENCHMARK(BM_Wavenumbers)->Arg(10)->Arg(70)->Arg(500);

static void BM_CorrelationJ(benchmark::State& state) {
  const BogoliubovModel m(100.0, 10.0, static_cast<int>(state.range(0)), squeezed_state(1.0, 100.0));
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(correlation_J(m, x, 1.3));
    x = x > 3.0 ? -3.0 : x + 0.01;
  }
}
BENCHMARK(BM_CorrelationJ)->Arg(20)->Arg(70);

static void BM_ImageStatistics(benchmark::State& state) {
  const BogoliubovModel m(100.0, 10.0, 70, squeezed_state(1.0, 100.0));
  const PixelGrid grid = PixelGrid::fitting(0.7, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_image_statistics(m, grid, 0.0).cov.sum());
}
BENCHMARK(BM_ImageStatistics)->Unit(benchmark::kMillisecond);

static void BM_GaussianFisher(benchmark::State& state) {
  const BogoliubovModel m(100.0, 10.0, 70, squeezed_state(1.0, 100.0));
  const PixelGrid grid = PixelGrid::fitting(0.7, 10.0);
  const StatsFamily family = [&](double q) { return build_image_statistics(m, grid, q); };
  GaussianFisherOptions opt;
  opt.check_step_halving = false;
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_fisher(family, 0.0, opt).F);
}
BENCHMARK(BM_GaussianFisher)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const BogoliubovModel m(100.0, 10.0, 70, squeezed_state(1.0, 100.0));
  const PixelGrid grid = PixelGrid::fitting(0.7, 10.0);
  const StatsFamily family = [&](double q) { return build_image_statistics(m, grid, q); };
  const auto st = family(0.0);
  const auto d = mean_derivative(family, 0.0);
  const auto g = almost_optimal_gain(st, d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_crb_experiment(st, d, g, 470.0, 10000, 1, 1, SampleModel::Gaussian).ratio);
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

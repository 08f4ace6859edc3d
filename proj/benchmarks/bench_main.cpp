#include <benchmark/benchmark.h>

#include "sdasel/decoder.hpp"
#include "sdasel/estimator.hpp"
#include "sdasel/harness.hpp"
#include "sdasel/model.hpp"
#include "sdasel/theory.hpp"

using namespace sdasel;

namespace {

GaussianLdaModel toeplitz_model(Index p, Index s) {
  return make_model(p, s, CovarianceSpec::toeplitz(p, 0.5), RandomSignMeans{}, Priors{}, 11);
}

void BM_SampleDataset(benchmark::State& state) {
  const Index p = state.range(0);
  const auto model = toeplitz_model(p, 5);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_dataset(model, 500, ++seed));
  state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_SampleDataset)->Arg(100)->Arg(300)->Arg(1000);

void BM_FitSda(benchmark::State& state) {
  const Index p = state.range(0);
  const auto model = toeplitz_model(p, 5);
  const Dataset data = sample_dataset(model, 400, 3);
  const double lambda = lambda_sda(model, 400.0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_sda(data, lambda));
}
BENCHMARK(BM_FitSda)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_FitPath(benchmark::State& state) {
  const Dataset data = sample_dataset(toeplitz_model(200, 5), 400, 3);
  for (auto _ : state) benchmark::DoNotOptimize(fit_sda_path(data));
}
BENCHMARK(BM_FitPath)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveDecode(benchmark::State& state) {
  const Index p = state.range(0);
  const Index s = state.range(1);
  const Dataset data = sample_dataset(toeplitz_model(p, s), 300, 5);
  DecoderOptions options;
  options.workers = static_cast<unsigned>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_decode(data, s, options));
}
BENCHMARK(BM_ExhaustiveDecode)
    ->Args({30, 2, 1})
    ->Args({30, 3, 1})
    ->Args({40, 3, 1})
    ->Args({40, 3, 4})
    ->Unit(benchmark::kMillisecond);

void BM_PhiFarEnumerated(benchmark::State& state) {
  const Index p = state.range(0);
  const Matrix sigma = make_covariance(CovarianceSpec::toeplitz(p, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(phi_far_enumerated(sigma, 3));
}
BENCHMARK(BM_PhiFarEnumerated)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_RunCell(benchmark::State& state) {
  CellSpec cell;
  cell.p = 100;
  cell.s = 16;
  cell.n = sample_size(4.0, 16, 100);
  cell.replications = 20;
  cell.seed = 9;
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(cell));
}
BENCHMARK(BM_RunCell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

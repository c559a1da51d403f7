#include <benchmark/benchmark.h>

#include "qgraph/edge_secular.hpp"
#include "qgraph/fd_oracle.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/mfunction.hpp"
#include "qgraph/spectrum.hpp"

namespace {

using namespace qgraph;

void BM_SecularEdge(benchmark::State& state) {
  const MarkedGraph g = default_fixture(Family::Example34);
  double lambda = 3.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(secular_edge(g, lambda));
    lambda += 1e-6;
  }
}
BENCHMARK(BM_SecularEdge);

void BM_SecularVertex(benchmark::State& state) {
  const MarkedGraph g = default_fixture(Family::Example34);
  double lambda = 3.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(secular_vertex(g, SpectralPoint::at(lambda)));
    lambda += 1e-6;
  }
}
BENCHMARK(BM_SecularVertex);

void BM_FindSpectrum(benchmark::State& state) {
  const MarkedGraph g = default_fixture(Family::Cycle);
  ScanConfig cfg;
  cfg.threads = 1;
  const auto lmax = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_spectrum(g, lmax, cfg));
}
BENCHMARK(BM_FindSpectrum)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_FdSpectrum(benchmark::State& state) {
  const MarkedGraph g = default_fixture(Family::Star);
  const FdOptions opts{static_cast<int>(state.range(0)), 10};
  for (auto _ : state) benchmark::DoNotOptimize(fd_eigenvalues(g, opts));
}
BENCHMARK(BM_FdSpectrum)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

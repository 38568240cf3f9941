#include <benchmark/benchmark.h>

#include "rgg/continuum.hpp"
#include "rgg/eigensolver.hpp"
#include "rgg/graph.hpp"
#include "rgg/hermite.hpp"
#include "rgg/moments.hpp"
#include "rgg/sampling.hpp"

using namespace rgg;

namespace {

PointCloud bench_cloud(int n) {
  return sample_gaussian(n, SigmaDiag::isotropic(1, 1.0), 4711);
}

void BM_SampleGaussian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SigmaDiag sigma = SigmaDiag::isotropic(2, 1.0);
  std::uint64_t rep = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_gaussian(n, sigma, 1, rep++));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleGaussian)->Arg(1000)->Arg(10000);

void BM_NeighborPairsGrid(benchmark::State& state) {
  const PointCloud c = bench_cloud(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(neighbor_pairs(c, 0.05, MetricOrder::lp(2.0)));
}
BENCHMARK(BM_NeighborPairsGrid)->Arg(1000)->Arg(5000)->Arg(20000);

void BM_NeighborPairsBrute(benchmark::State& state) {
  const PointCloud c = bench_cloud(static_cast<int>(state.range(0)));
  const MetricOrder p = MetricOrder::lp(2.0);
  for (auto _ : state) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < c.n(); ++i)
      for (int j = i + 1; j < c.n(); ++j)
        if (lp_distance(c.row(i), c.row(j), p) <= 0.05) pairs.push_back({i, j});
    benchmark::DoNotOptimize(pairs);
  }
}
BENCHMARK(BM_NeighborPairsBrute)->Arg(1000)->Arg(5000);

void BM_BuildHardAffinity(benchmark::State& state) {
  const PointCloud c = bench_cloud(static_cast<int>(state.range(0)));
  GraphSpec spec;
  spec.r_n = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(build_hard_affinity(c, spec));
}
BENCHMARK(BM_BuildHardAffinity)->Arg(5000);

void BM_LaplacianMatvec(benchmark::State& state) {
  const PointCloud c = bench_cloud(5000);
  GraphSpec spec;
  spec.r_n = 0.05;
  LaplacianOperator op(build_hard_affinity(c, spec), 2400.0);
  std::vector<double> x(c.n(), 1.0), y(c.n());
  for (auto _ : state) {
    op.apply_sym(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * op.affinity().nnz());
}
BENCHMARK(BM_LaplacianMatvec);

void BM_SmallestEigsLanczos(benchmark::State& state) {
  const PointCloud c = bench_cloud(static_cast<int>(state.range(0)));
  GraphSpec spec;
  spec.r_n = 0.05;
  const SparseAffinity a = build_hard_affinity(c, spec);
  for (auto _ : state) {
    LaplacianOperator op(SparseAffinity(a), 2400.0);
    benchmark::DoNotOptimize(smallest_eigs(op, 20, SolverChoice::Lanczos));
  }
}
BENCHMARK(BM_SmallestEigsLanczos)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_HermiteEval(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-6;
    benchmark::DoNotOptimize(hermite_eval(12, x));
  }
}
BENCHMARK(BM_HermiteEval);

void BM_EnumerateSpectrum(benchmark::State& state) {
  const SigmaDiag sigma(std::vector<double>{1.0, 2.0, 0.5});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        enumerate_spectrum(sigma, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnumerateSpectrum)->Arg(100)->Arg(2000);

void BM_ComputeMomentsMemoised(benchmark::State& state) {
  const KernelSpec g = KernelSpec::exponential(0.25);
  for (auto _ : state)
    benchmark::DoNotOptimize(compute_moments(2, MetricOrder::lp(1.5), g));
}
BENCHMARK(BM_ComputeMomentsMemoised);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "hawkesdp/dp.hpp"
#include "hawkesdp/harness.hpp"
#include "hawkesdp/simulate.hpp"

namespace {

using namespace hawkesdp;

BinSeries synthetic_bins(int n, int d, int p, std::uint64_t seed) {
  Rng rng(seed);
  BinSeries bins;
  bins.config = BinConfig{0.5, 0.5 * n, p};
  bins.counts = CountMatrix::Zero(n, d);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < d; ++j)
      bins.counts(k, j) = rng.uniform() < 0.2 ? 1 : 0;
  return bins;
}

void bm_simulate_paper2d(benchmark::State& state) {
  const HawkesModel model = builtin_model("paper-2d");
  const double horizon = state.range(0);
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(simulate(model, horizon, rng));
  }
}
BENCHMARK(bm_simulate_paper2d)->Arg(200)->Arg(1000);

void bm_build_design(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BinSeries bins = synthetic_bins(n, 2, 50, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_design(bins, DenseStorage::never));
}
BENCHMARK(bm_build_design)->Arg(2000)->Arg(20000);

void bm_gradient(benchmark::State& state) {
  const BinSeries bins = synthetic_bins(4000, 2, static_cast<int>(state.range(0)), 5);
  const DesignMatrices design = build_design(bins, DenseStorage::never);
  const ParamMatrix u = ParamMatrix::Constant(design.d, design.gram.rows(), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(u, design));
}
BENCHMARK(bm_gradient)->Arg(8)->Arg(100);

void bm_nuclear_lmo(benchmark::State& state) {
  Rng rng(11);
  Eigen::MatrixXd g(state.range(0), state.range(1));
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = rng.normal();
  for (auto _ : state) {
    Rng lmo_rng(13);
    benchmark::DoNotOptimize(nuclear_lmo(g, 1.0, lmo_rng));
  }
}
BENCHMARK(bm_nuclear_lmo)->Args({4, 321})->Args({16, 401});

void bm_dp_pgd(benchmark::State& state) {
  const BinSeries bins = synthetic_bins(3000, 2, 8, 17);
  const DesignMatrices design = build_design(bins, DenseStorage::never);
  NoisePlan plan;
  plan.sigma2 = 0.01;
  PgdOptions options;
  options.R = 4.0;
  const ParamMatrix u0 = ParamMatrix::Zero(design.d, design.gram.rows());
  for (auto _ : state) {
    Rng rng(23);
    benchmark::DoNotOptimize(dp_pgd(design, FrobeniusBall{0.1}, plan,
                                    static_cast<int>(state.range(0)), u0, rng,
                                    options));
  }
}
BENCHMARK(bm_dp_pgd)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();

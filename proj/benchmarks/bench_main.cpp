#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wigsim/connection.hpp"
#include "wigsim/diagnostics.hpp"
#include "wigsim/moyal.hpp"
#include "wigsim/transform.hpp"

namespace {

std::vector<double> random_signal(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = unit(rng);
  return x;
}

void bm_fwt_forward(benchmark::State& state) {
  const auto fam = wigsim::make_family("daubechies-6");
  const auto x = random_signal(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    auto d = wigsim::fwt_forward_1d(x, fam, 3);
    benchmark::DoNotOptimize(d.coarse.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_fwt_forward)->RangeMultiplier(2)->Range(1 << 12, 1 << 18)->Complexity();

void bm_fwt_2d(benchmark::State& state) {
  const auto fam = wigsim::make_family("daubechies-6");
  const int n = static_cast<int>(state.range(0));
  Eigen::MatrixXd field(n, n);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) field(i, j) = unit(rng);
  for (auto _ : state) {
    auto d = wigsim::fwt_2d(field, fam, 2);
    benchmark::DoNotOptimize(d.coeffs.data());
  }
}
BENCHMARK(bm_fwt_2d)->RangeMultiplier(2)->Range(64, 512);

void bm_moyal_apply(benchmark::State& state) {
  const auto fam = wigsim::make_family("daubechies-6");
  const int j = static_cast<int>(state.range(0));
  auto grid = wigsim::PhaseSpaceGrid::create(-8, 16, -8, 16, j, j, 1.0, 1.0);
  auto op = wigsim::assemble_moyal(wigsim::poly_potential({0, 0, -1, 0, 0.1}), grid, 1,
                                   fam, fam);
  auto field = wigsim::oracle_harmonic(1.0, 0.0, 1.0, 0.0, grid);
  Eigen::MatrixXd out, scratch;
  for (auto _ : state) {
    op.apply_into(field.data, out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_moyal_apply)->DenseRange(6, 9);

void bm_derivative_matvec(benchmark::State& state) {
  const auto fam = wigsim::make_family("daubechies-6");
  const auto dm = wigsim::derivative_matrix(fam, 1, 10, 16.0);
  Eigen::VectorXd x = Eigen::VectorXd::Random(1 << 10);
  for (auto _ : state) {
    Eigen::VectorXd y = dm.apply(x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(bm_derivative_matvec);

}  // namespace

BENCHMARK_MAIN();

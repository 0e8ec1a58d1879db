#include <benchmark/benchmark.h>

#include "pcsimple/pcsimple.hpp"

namespace {

using namespace pcsimple;

ModelSpec toeplitz_model(int p, int peff, double rho) {
  Rng rng(1);
  ModelSpec m;
  m.sigma_x = build_sigma(SigmaKind::toeplitz, p, rho);
  m.mu_x = Eigen::VectorXd::Zero(p);
  m.beta = draw_coefficients(p, peff, rng);
  return m;
}

void BM_PartialCorrelation(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const ModelSpec m = toeplitz_model(20, 5, 0.5);
  const Eigen::MatrixXd c = covariance_to_correlation(joint_covariance(m));
  std::vector<int> s;
  for (int k = 0; k < order; ++k) s.push_back(2 + 2 * k);
  for (auto _ : state) benchmark::DoNotOptimize(partial_correlation(c, 0, 1, s));
}
BENCHMARK(BM_PartialCorrelation)->DenseRange(0, 4);

void BM_PartialCorrelationRecursive(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const ModelSpec m = toeplitz_model(20, 5, 0.5);
  const Eigen::MatrixXd c = covariance_to_correlation(joint_covariance(m));
  std::vector<int> s;
  for (int k = 0; k < order; ++k) s.push_back(2 + 2 * k);
  for (auto _ : state) benchmark::DoNotOptimize(partial_correlation_recursive(c, 0, 1, s));
}
BENCHMARK(BM_PartialCorrelationRecursive)->DenseRange(0, 4);

void BM_Simulate(benchmark::State& state) {
  const ModelSpec m = toeplitz_model(static_cast<int>(state.range(0)), 10, 0.5);
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_dataset(m, 100, rng));
}
BENCHMARK(BM_Simulate)->Arg(19)->Arg(499);

void BM_SelectHighDimensional(benchmark::State& state) {
  const ModelSpec m = toeplitz_model(499, 10, static_cast<double>(state.range(0)) / 10.0);
  Rng rng(3);
  const SufficientStats stats = correlation_matrix(simulate_dataset(m, 100, rng));
  SelectOptions options;
  options.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(pc_simple_select(stats, 0.05, options));
}
BENCHMARK(BM_SelectHighDimensional)->Arg(0)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

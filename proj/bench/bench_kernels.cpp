#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qcoin/kernels.hpp"

using namespace qcoin;

namespace {

const QuadratureRule& phi_rule() {
  static const auto r = composite_gauss_legendre(std::vector<double>{-1.0, -0.2, 0.0, 0.2, 1.0}, 128);
  return r;
}
const QuadratureRule& theta_rule() {
  static const auto r = composite_gauss_legendre(std::vector<double>{0.5, 1.5, 2.5}, 128);
  return r;
}
double density(double p, double t) { return std::exp(-p * p / 0.08 - (t - 1.5) * (t - 1.5) / 0.3); }

std::vector<double> distances() {
  std::vector<double> d;
  for (int k = 0; k <= 200; ++k) d.push_back(k);
  return d;
}

void BM_projector_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::average_projector_serial(phi_rule(), theta_rule(), density));
}
void BM_projector_omp(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::average_projector_omp(phi_rule(), theta_rule(), density));
}

void BM_fill_serial(benchmark::State& st) {
  const auto src = PhotonNumberDistribution::poisson(1e-3);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::count_filled_serial(src, 1000000, 42));
}
void BM_fill_omp(benchmark::State& st) {
  const auto src = PhotonNumberDistribution::poisson(1e-3);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::count_filled_omp(src, 1000000, 42));
}

void BM_sweep_serial(benchmark::State& st) {
  KeyRateSetup s;
  s.prep = GaussianPrepModel{};
  const auto d = distances();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::sweep_serial(s, d));
}
void BM_sweep_omp(benchmark::State& st) {
  KeyRateSetup s;
  s.prep = GaussianPrepModel{};
  const auto d = distances();
  for (auto _ : st) benchmark::DoNotOptimize(kernels::sweep_omp(s, d));
}

}  // namespace

BENCHMARK(BM_projector_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_projector_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_fill_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fill_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_omp)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

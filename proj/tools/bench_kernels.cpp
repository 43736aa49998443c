// Serial vs OpenMP timings for the hot loops: Born-probability batches over
// all 81 four-qubit settings, the MLE gradient accumulation and the Monte
// Carlo resampling map.

#include <benchmark/benchmark.h>

#include <random>

#include "owqc/cluster.hpp"
#include "owqc/kernels.hpp"
#include "owqc/rng.hpp"
#include "owqc/tomography.hpp"

namespace {

using namespace owqc;

const std::vector<Mat>& star_kets() {
  static const std::vector<Mat> kets = tomo::settings_kets(tomo::all_settings(4));
  return kets;
}

Mat noisy_star() {
  return cluster::make_star(cluster::preset("paper-2013")).state.elements;
}

Eigen::MatrixXd random_coefficients(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd coef(81, 16);
  for (Eigen::Index s = 0; s < coef.rows(); ++s) {
    for (Eigen::Index o = 0; o < coef.cols(); ++o) coef(s, o) = dist(rng);
  }
  return coef;
}

void BM_BornProbabilitiesSerial(benchmark::State& state) {
  const Mat rho = noisy_star();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::born_probabilities_serial(rho, star_kets()));
  }
}
BENCHMARK(BM_BornProbabilitiesSerial);

void BM_BornProbabilitiesParallel(benchmark::State& state) {
  const Mat rho = noisy_star();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::born_probabilities_parallel(rho, star_kets()));
  }
}
BENCHMARK(BM_BornProbabilitiesParallel);

void BM_ProjectorSumSerial(benchmark::State& state) {
  const Eigen::MatrixXd coef = random_coefficients(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::weighted_projector_sum_serial(star_kets(), coef));
  }
}
BENCHMARK(BM_ProjectorSumSerial);

void BM_ProjectorSumParallel(benchmark::State& state) {
  const Eigen::MatrixXd coef = random_coefficients(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::weighted_projector_sum_parallel(star_kets(), coef));
  }
}
BENCHMARK(BM_ProjectorSumParallel);

double resample_trace(const tomo::MeasurementRecord& record, int index) {
  return tomo::resample_poisson(record, split_seed(11, index)).counts.sum();
}

void BM_MonteCarloMapSerial(benchmark::State& state) {
  const auto record = tomo::exact_record(DensityMatrix::from_matrix(noisy_star()),
                                         tomo::all_settings(4), 600.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::map_indexed_serial(
        64, [&](int i) { return resample_trace(record, i); }));
  }
}
BENCHMARK(BM_MonteCarloMapSerial);

void BM_MonteCarloMapParallel(benchmark::State& state) {
  const auto record = tomo::exact_record(DensityMatrix::from_matrix(noisy_star()),
                                         tomo::all_settings(4), 600.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::map_indexed_parallel(
        64, [&](int i) { return resample_trace(record, i); }));
  }
}
BENCHMARK(BM_MonteCarloMapParallel);

}  // namespace

BENCHMARK_MAIN();

#include "acthull/analysis.hpp"
#include "acthull/classification.hpp"
#include "acthull/rng.hpp"

#include <benchmark/benchmark.h>

using namespace acthull;

namespace {

LabeledVectors clusters(Index per_class, Index d, int classes, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix m(static_cast<Eigen::Index>(per_class * classes), static_cast<Eigen::Index>(d));
  LabeledVectors out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const int c = static_cast<int>(i % classes);
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal() + (j == c ? 4.0 : 0.0);
    out.labels.push_back(c);
  }
  out.vectors = PointSet(std::move(m));
  return out;
}

void BM_FitNearestHull(benchmark::State& state) {
  const auto train = clusters(static_cast<Index>(state.range(0)), 64, 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_nearest_hull(train, BuilderConfig{}).classes.size());
}
BENCHMARK(BM_FitNearestHull)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const auto train = clusters(200, 64, 10, 2);
  const auto model = fit_nearest_hull(train, BuilderConfig{});
  const auto test = clusters(10, 64, 10, 3);
  Index i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(model, test.vectors.row(i)).label);
    i = (i + 1) % test.size();
  }
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMicrosecond);

void BM_InterClassMatrix(benchmark::State& state) {
  ActivationSet acts;
  acts.data = clusters(200, 64, 10, 4);
  for (auto _ : state) benchmark::DoNotOptimize(inter_class_matrix(acts).matrix.sum());
}
BENCHMARK(BM_InterClassMatrix)->Unit(benchmark::kMillisecond);

}  // namespace

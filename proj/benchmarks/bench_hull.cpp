#include "acthull/hull_builder.hpp"
#include "acthull/projection.hpp"
#include "acthull/rng.hpp"
#include "acthull/seminmf.hpp"
#include "acthull/toy_data.hpp"

#include <benchmark/benchmark.h>

using namespace acthull;

namespace {

PointSet gaussian(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return PointSet(std::move(m));
}

PointSet toy(ToyKind kind) {
  ToySpec spec;
  spec.kind = kind;
  spec.n = 200;
  spec.noise = kind == ToyKind::circles || kind == ToyKind::moons ? 0.05 : 0.0;
  spec.seed = 7;
  return gen_toy(spec).vectors;
}

void BM_HullDistance(benchmark::State& state) {
  const auto m = static_cast<Index>(state.range(0));
  const auto d = static_cast<Index>(state.range(1));
  const PointSet x = gaussian(m, d, 1);
  Rng rng(2);
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = 3.0 * rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(hull_distance(v, x).distance);
}
BENCHMARK(BM_HullDistance)->Args({10, 2})->Args({100, 64})->Args({1000, 64});

// The four toys under both scoring modes.
template <bool Ge>
void BM_BuildToy(benchmark::State& state) {
  const PointSet p = toy(static_cast<ToyKind>(state.range(0)));
  BuilderConfig cfg;
  cfg.epsilon_rel = 1e-9;
  cfg.seed = 7;
  cfg.bounded_scoring = state.range(1) != 0;
  Index qp = 0;
  for (auto _ : state) qp = (Ge ? build_ge(p, cfg) : build_revised_ge(p, cfg)).qp_solve_count;
  state.counters["qp_solves"] = static_cast<double>(qp);
  state.SetLabel(std::string(to_string(static_cast<ToyKind>(state.range(0)))) +
                 (cfg.bounded_scoring ? "/bounded" : "/exhaustive"));
}
BENCHMARK(BM_BuildToy<false>)->Name("BM_BuildRevisedGE")->ArgsProduct({{0, 1, 2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildToy<true>)->Name("BM_BuildGE")->ArgsProduct({{0, 1, 2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_SemiNmfInit(benchmark::State& state) {
  const PointSet p = gaussian(static_cast<Index>(state.range(0)), 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(init_seminmf(p, 32, 100, 1));
}
BENCHMARK(BM_SemiNmfInit)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BuildGaussian64(benchmark::State& state) {
  const PointSet p = gaussian(static_cast<Index>(state.range(0)), 64, 4);
  BuilderConfig cfg;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(build_revised_ge(p, cfg).vertex_indices.size());
}
BENCHMARK(BM_BuildGaussian64)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

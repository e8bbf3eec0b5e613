#include "acthull/analysis.hpp"
#include "acthull/hull_builder.hpp"
#include "acthull/parallel.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <atomic>
#include <stdexcept>

using namespace acthull;

namespace {

struct ThreadGuard {
  ~ThreadGuard() { set_thread_count(0); }
};

}  // namespace

TEST_CASE("parallel_for covers every index once") {
  ThreadGuard guard;
  for (unsigned t : {1u, 3u, 8u}) {
    set_thread_count(t);
    CHECK(thread_count() == t);
    std::vector<std::atomic<int>> hits(1001);
    parallel_for(hits.size(), [&](Index i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, [](Index) { FAIL("no work expected"); });
}

TEST_CASE("parallel_for rethrows") {
  ThreadGuard guard;
  set_thread_count(4);
  CHECK_THROWS_AS(parallel_for(100, [](Index i) {
                    if (i == 57) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("results do not depend on the thread count") {
  ThreadGuard guard;
  auto data = testing_support::blobs(120, 6, 3.0, 3);
  ActivationSet acts;
  acts.layer_index = 1;
  acts.data = data;
  BuilderConfig cfg;
  cfg.epsilon_rel = 1e-3;
  cfg.seed = 5;

  set_thread_count(1);
  const auto hull1 = build_revised_ge(data.vectors, cfg);
  const auto hist1 = inner_class_histogram(acts, 0, 20, 500, 2);
  const auto mat1 = inter_class_matrix(acts, 3000, 2);
  const auto ext1 = audit_all_extreme(acts);

  set_thread_count(4);
  const auto hull4 = build_revised_ge(data.vectors, cfg);
  const auto hist4 = inner_class_histogram(acts, 0, 20, 500, 2);
  const auto mat4 = inter_class_matrix(acts, 3000, 2);
  const auto ext4 = audit_all_extreme(acts);

  CHECK(hull1.vertex_indices == hull4.vertex_indices);
  CHECK(hull1.residual_trace == hull4.residual_trace);
  CHECK(hull1.qp_solve_count == hull4.qp_solve_count);
  CHECK(hist1.counts == hist4.counts);
  CHECK(mat1.matrix == mat4.matrix);
  CHECK(ext1[0].non_extreme_indices == ext4[0].non_extreme_indices);
  CHECK(ext1[1].non_extreme_indices == ext4[1].non_extreme_indices);
}

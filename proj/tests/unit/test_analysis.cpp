#include "acthull/analysis.hpp"
#include "acthull/errors.hpp"
#include "acthull/geometry.hpp"
#include "acthull/toy_data.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace acthull;
using testing_support::pts;

namespace {

ActivationSet acts_of(const PointSet& p, std::vector<int> labels, Index layer = 1) {
  ActivationSet a;
  a.layer_index = layer;
  a.split = "train";
  a.data.vectors = p;
  a.data.labels = std::move(labels);
  return a;
}

ActivationSet acts_of(const LabeledVectors& d) { return acts_of(d.vectors, d.labels); }

double brute_mean(const PointSet& p, const std::vector<int>& labels, int a, int b) {
  double total = 0.0;
  Index count = 0;
  for (Index i = 0; i < p.size(); ++i) {
    for (Index j = 0; j < p.size(); ++j) {
      if (labels[i] != a || labels[j] != b) continue;
      if (a == b && j <= i) continue;
      total += (p.row(i) - p.row(j)).norm();
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

}  // namespace

TEST_CASE("extremity audit") {
  SUBCASE("affinely independent triangle") {
    const auto a = acts_of(pts({{0, 0}, {1, 0}, {0, 1}}), {0, 0, 0});
    const auto audits = audit_all_extreme(a);
    REQUIRE(audits.size() == 1);
    CHECK(audits[0].total == 3);
    CHECK(audits[0].non_extreme == 0);
  }
  SUBCASE("square with its centroid") {
    const auto a = acts_of(pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}), {0, 0, 0, 0, 0});
    const auto audits = audit_all_extreme(a);
    REQUIRE(audits.size() == 1);
    CHECK(audits[0].non_extreme == 1);
    CHECK(audits[0].non_extreme_indices == std::vector<Index>{4});
    CHECK(audits[0].failures.empty());
  }
  SUBCASE("classes are audited separately") {
    // The class-1 point sits inside class 0's square but is alone in its class.
    const auto a = acts_of(pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.4, 0.4}}), {0, 0, 0, 0, 1, 1});
    const auto audits = audit_all_extreme(a);
    REQUIRE(audits.size() == 2);
    CHECK(audits[0].non_extreme == 0);
    CHECK(audits[1].non_extreme == 0);
  }
}

TEST_CASE("mis-inclusion audit") {
  const PointSet square = pts({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  SUBCASE("far apart classes") {
    const auto a = acts_of(pts({{0, 0}, {1, 0}, {0, 1}, {100, 100}, {101, 100}, {100, 101}}), {0, 0, 0, 1, 1, 1});
    const std::vector<PointSet> hulls{pts({{0, 0}, {1, 0}, {0, 1}}), pts({{100, 100}, {101, 100}, {100, 101}})};
    const auto audit = audit_mis_inclusion(a, hulls);
    CHECK(audit.violations.empty());
    CHECK(audit.pairs_tested == 6);
  }
  SUBCASE("nested class is flagged everywhere") {
    const auto a = acts_of(pts({{0, 0}, {4, 0}, {4, 4}, {0, 4}, {1, 1}, {2, 3}, {3, 1.5}}), {0, 0, 0, 0, 1, 1, 1});
    const std::vector<PointSet> hulls{square, pts({{1, 1}, {2, 3}, {3, 1.5}})};
    SolverConfig cfg;
    const auto audit = audit_mis_inclusion(a, hulls, cfg);
    REQUIRE(audit.violations.size() == 3);
    for (const auto& v : audit.violations) {
      CHECK(v.own_class == 1);
      CHECK(v.containing_class == 0);
      CHECK(v.distance <= cfg.zero_tol * 8.0);
    }
  }
}

TEST_CASE("inner-class histogram") {
  SUBCASE("two points at distance five") {
    const auto h = inner_class_histogram(acts_of(pts({{0, 0}, {3, 4}}), {0, 0}), 0, 10);
    CHECK(h.counts.size() == 10);
    CHECK(h.bin_edges.size() == 11);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), Index{0}) == 1);
    CHECK(h.counts.back() == 1);
    CHECK(h.bin_edges.back() == doctest::Approx(5.0));
    CHECK(h.peak_bin_center == doctest::Approx(4.75));
  }
  SUBCASE("identical points") {
    const auto h = inner_class_histogram(acts_of(pts({{1, 1}, {1, 1}, {1, 1}}), {2, 2, 2}), 2, 5);
    CHECK(h.counts.front() == 3);
    CHECK(h.peak_bin_center == 0.0);
  }
  SUBCASE("mass is conserved") {
    const auto d = testing_support::gaussian(60, 3, 4);
    const auto a = acts_of(d, std::vector<int>(60, 0));
    const auto full = inner_class_histogram(a, 0);
    CHECK(!full.sampled);
    CHECK(full.pairs == 60 * 59 / 2);
    CHECK(std::accumulate(full.counts.begin(), full.counts.end(), Index{0}) == full.pairs);
    const auto capped = inner_class_histogram(a, 0, kDefaultBins, 500, 3);
    CHECK(capped.sampled);
    CHECK(std::accumulate(capped.counts.begin(), capped.counts.end(), Index{0}) == 500);
    CHECK(inner_class_histogram(a, 0, kDefaultBins, 500, 3).counts == capped.counts);
  }
  SUBCASE("errors") {
    const auto a = acts_of(pts({{0, 0}, {1, 1}, {2, 2}}), {0, 0, 1});
    CHECK_THROWS_AS(inner_class_histogram(a, 5), InputError);
    CHECK_THROWS_AS(inner_class_histogram(a, 1), InputError);
  }
}

TEST_CASE("inter-class matrix") {
  SUBCASE("one point per class") {
    const auto m = inter_class_matrix(acts_of(pts({{0, 0}, {3, 4}}), {0, 1}));
    CHECK(m.matrix(0, 1) == doctest::Approx(5.0));
    CHECK(m.matrix(1, 0) == doctest::Approx(5.0));
    CHECK(m.matrix(0, 0) == 0.0);
    CHECK(m.matrix(1, 1) == 0.0);
  }
  SUBCASE("brute-force agreement and symmetry") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Index n = 40 + 40 * seed;
      const auto p = testing_support::gaussian(n, 4, seed + 30);
      Rng rng(seed);
      std::vector<int> labels(n);
      for (auto& l : labels) l = static_cast<int>(rng.index(4));
      const auto m = inter_class_matrix(acts_of(p, labels));
      for (Eigen::Index a = 0; a < m.matrix.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.matrix.cols(); ++b) {
          CHECK(std::abs(m.matrix(a, b) - m.matrix(b, a)) <= 1e-9);
          CHECK(m.matrix(a, b) == doctest::Approx(brute_mean(p, labels, m.classes[a], m.classes[b])).epsilon(1e-12));
          CHECK(!m.sampled(a, b));
        }
      }
    }
  }
  SUBCASE("gaussian blobs ten apart") {
    RowMatrix x(1000, 2);
    Rng rng(77);
    std::vector<int> labels(1000);
    for (Eigen::Index i = 0; i < 1000; ++i) {
      labels[static_cast<Index>(i)] = i < 500 ? 0 : 1;
      x(i, 0) = rng.normal() + (i < 500 ? 0.0 : 10.0);
      x(i, 1) = rng.normal();
    }
    const double expected = oracle::mc_blob_distance(10.0, 1'000'000, 5);
    const auto m = inter_class_matrix(acts_of(PointSet(std::move(x)), labels));
    CHECK(std::abs(m.matrix(0, 1) - expected) <= 0.2);
  }
  SUBCASE("sampled estimate converges") {
    const Index n = 300;
    const auto p = testing_support::gaussian(n, 5, 40);
    std::vector<int> labels(n);
    for (Index i = 0; i < n; ++i) labels[i] = i < n / 2 ? 0 : 1;
    // Spread of the pair distances gives the standard error of each estimate.
    double s1 = 0.0, s2 = 0.0;
    Index count = 0;
    for (Index i = 0; i < n / 2; ++i) {
      for (Index j = n / 2; j < n; ++j) {
        const double dist = (p.row(i) - p.row(j)).norm();
        s1 += dist;
        s2 += dist * dist;
        ++count;
      }
    }
    const double mean = s1 / static_cast<double>(count);
    const double sd = std::sqrt(s2 / static_cast<double>(count) - mean * mean);
    const auto a = acts_of(p, labels);
    const auto small = inter_class_matrix(a, 2000, 9);
    const auto large = inter_class_matrix(a, 4000, 9);
    CHECK(small.sampled(0, 1));
    const double se = sd * std::sqrt(1.0 / 2000 + 1.0 / 4000);
    CHECK(std::abs(small.matrix(0, 1) - large.matrix(0, 1)) <= 3.0 * se);
    CHECK(std::abs(large.matrix(0, 1) - mean) <= 3.0 * sd / std::sqrt(4000.0));
  }
}

TEST_CASE("inner-inter correlation") {
  // Three classes on a line: two points each, width s, placed so that the
  // mean inter distance grows linearly with s.
  auto line_classes = [](std::array<double, 3> widths) {
    const std::array<double, 3> centers{0.0, -100.0, 200.0};
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c) {
      rows.push_back({centers[c] - widths[c] / 2, 0.0});
      rows.push_back({centers[c] + widths[c] / 2, 0.0});
      labels.insert(labels.end(), {c, c});
    }
    return inter_class_matrix(acts_of(pts(rows), labels));
  };
  const auto linear = inner_inter_correlation(line_classes({1.0, 2.0, 3.0}));
  CHECK(linear.inner == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(linear.pearson == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inner_inter_correlation(line_classes({3.0, 2.0, 1.0})).pearson < 0.0);
  CHECK(std::isnan(inner_inter_correlation(line_classes({1.0, 1.0, 1.0})).pearson));
  CHECK_THROWS_AS(inner_inter_correlation(inter_class_matrix(acts_of(pts({{0, 0}, {1, 1}}), {0, 1}))), InputError);
}

TEST_CASE("class radius statistics") {
  SUBCASE("circle about its centroid") {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 12; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 12.0;
      rows.push_back({2.0 * std::cos(t), 2.0 * std::sin(t)});
    }
    const auto stats = class_radius_stats(acts_of(pts(rows), std::vector<int>(12, 0)));
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].mean == doctest::Approx(2.0));
    CHECK(stats[0].stddev <= 1e-12);
  }
  SUBCASE("single point") {
    const auto stats = class_radius_stats(acts_of(pts({{3, -1}}), {0}));
    CHECK(stats[0].mean == 0.0);
  }
  SUBCASE("concentric rings") {
    ToySpec spec;
    spec.kind = ToyKind::circles;
    spec.n = 200;
    const auto stats = class_radius_stats(acts_of(gen_toy(spec)));
    REQUIRE(stats.size() == 2);
    CHECK(std::abs(stats[0].mean - 1.0) <= 1e-9);
    CHECK(std::abs(stats[1].mean - 0.5) <= 1e-9);
    CHECK(stats[0].count == 100);
  }
}

TEST_CASE("layer mean distance") {
  const auto a = acts_of(pts({{0, 0}, {3, 4}, {6, 8}}), {0, 1, 0});
  CHECK(layer_mean_distance(a) == doctest::Approx((5.0 + 10.0 + 5.0) / 3.0));
}

#include "acthull/baselines.hpp"
#include "acthull/errors.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace acthull;
using testing_support::pts;
using testing_support::vec;

namespace {

LabeledVectors random_labels(const PointSet& p, int classes, std::uint64_t seed) {
  Rng rng(seed);
  LabeledVectors d;
  d.vectors = p;
  for (Index i = 0; i < p.size(); ++i) d.labels.push_back(static_cast<int>(rng.index(static_cast<std::uint64_t>(classes))));
  return d;
}

}  // namespace

TEST_CASE("knn matches brute force") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Index n = 100 + 130 * seed;
    const auto train = testing_support::gaussian(n, 5, seed);
    const auto queries = testing_support::gaussian(30, 5, seed + 100);
    std::vector<Eigen::VectorXd> rows;
    for (Index i = 0; i < n; ++i) rows.push_back(train.row(i));
    for (Index q = 0; q < queries.size(); ++q) {
      const auto got = nearest_neighbors(train, queries.row(q), 7);
      const auto want = oracle::knn_sorted(rows, queries.row(q), 7, static_cast<std::size_t>(-1));
      CHECK(got == want);
    }
    const auto loo = nearest_neighbors(train, train.row(3), 5, 3);
    CHECK(std::find(loo.begin(), loo.end(), Index{3}) == loo.end());
  }
}

TEST_CASE("knn baseline") {
  SUBCASE("exact match with k = 1") {
    LabeledVectors train;
    train.vectors = pts({{0, 0}, {1, 1}, {2, 2}});
    train.labels = {0, 1, 2};
    LabeledVectors test;
    test.vectors = pts({{1, 1}});
    test.labels = {1};
    CHECK(knn_baseline(train, test, 1).test_accuracy == 1.0);
  }
  SUBCASE("separable blobs") {
    const auto r = knn_baseline(testing_support::blobs(100, 3, 12.0, 1), testing_support::blobs(50, 3, 12.0, 2));
    CHECK(r.train_accuracy == 1.0);
    CHECK(r.test_accuracy == 1.0);
  }
  SUBCASE("majority ties go to the lowest class") {
    const std::vector<int> labels{2, 1, 1, 2};
    const std::vector<Index> nb{0, 1, 2, 3};
    CHECK(majority_vote(labels, nb) == 1);
  }
  SUBCASE("k too large") {
    const auto d = testing_support::blobs(3, 2, 1.0, 3);
    CHECK_THROWS_AS(knn_baseline(d, d, 6), InputError);
    CHECK_THROWS_AS(knn_baseline(d, d, 0), InputError);
  }
}

TEST_CASE("logistic regression") {
  SUBCASE("gradient check") {
    const auto d = random_labels(testing_support::gaussian(40, 6, 4), 3, 5);
    LogisticRegression model(6, 3);
    Rng rng(6);
    for (Eigen::Index i = 0; i < model.weights().size(); ++i) model.weights().data()[i] = 0.3 * rng.normal();
    for (Eigen::Index i = 0; i < model.bias().size(); ++i) model.bias()(i) = 0.1 * rng.normal();
    CHECK(logreg_gradient_check(model, d.vectors.matrix(), d.labels, 1e-3, 100, 1) <= 1e-4);
  }
  SUBCASE("separable blobs") {
    const auto r = logreg_baseline(testing_support::blobs(100, 4, 8.0, 7), testing_support::blobs(50, 4, 8.0, 8));
    CHECK(r.train_accuracy >= 0.99);
    CHECK(r.test_accuracy >= 0.99);
  }
  SUBCASE("random labels are near chance") {
    const auto train = random_labels(testing_support::gaussian(400, 5, 9), 2, 10);
    const auto test = random_labels(testing_support::gaussian(400, 5, 11), 2, 12);
    const auto r = logreg_baseline(train, test);
    CHECK(r.test_accuracy == doctest::Approx(0.5).epsilon(0.2));
  }
  SUBCASE("deterministic per seed") {
    const auto d = testing_support::blobs(50, 3, 2.0, 13);
    LogRegConfig cfg;
    cfg.init_scale = 0.1;
    cfg.seed = 4;
    const auto a = train_logreg(d, cfg);
    const auto b = train_logreg(d, cfg);
    CHECK(a.weights() == b.weights());
  }
  SUBCASE("divergence") {
    const auto d = testing_support::blobs(20, 2, 1e150, 14);
    LogRegConfig cfg;
    cfg.lr = 1e100;
    CHECK_THROWS_AS(train_logreg(d, cfg), DivergenceError);
  }
}

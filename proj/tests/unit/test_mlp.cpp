#include "acthull/errors.hpp"
#include "acthull/mlp.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace acthull;

namespace {

LabeledVectors noisy_labels(Index n, Index d, int classes, std::uint64_t seed) {
  Rng rng(seed);
  LabeledVectors out;
  out.vectors = testing_support::gaussian(n, d, seed + 1);
  for (Index i = 0; i < n; ++i) out.labels.push_back(static_cast<int>(rng.index(static_cast<std::uint64_t>(classes))));
  return out;
}

std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(ACTHULL_TEST_TMP);
  return std::string(ACTHULL_TEST_TMP) + "/" + name;
}

}  // namespace

TEST_CASE("activation extraction shapes") {
  Rng rng(1);
  const Mlp net(5, {8, 8, 8, 8}, 3, rng);
  const auto data = noisy_labels(10, 5, 3, 2);
  const auto acts = extract_activations(net, data, 2);
  CHECK(acts.data.size() == 10);
  CHECK(acts.data.dim() == 8);
  CHECK(acts.layer_index == 2);
  CHECK(acts.data.vectors.matrix().minCoeff() >= 0.0);
  CHECK(acts.data.labels == data.labels);
  CHECK_THROWS_AS(extract_activations(net, data, 0), InputError);
  CHECK_THROWS_AS(extract_activations(net, data, 5), InputError);

  const auto pre = extract_activations(net, data, 1, "train", true);
  CHECK(pre.data.vectors.matrix().minCoeff() < 0.0);
  CHECK(pre.data.vectors.matrix().cwiseMax(0.0) == extract_activations(net, data, 1).data.vectors.matrix());

  RowMatrix twice(2, 5);
  twice.row(0) = data.vectors.row(3).transpose();
  twice.row(1) = data.vectors.row(3).transpose();
  const RowMatrix out = net.layer_output(twice, 3);
  CHECK(out.row(0) == out.row(1));
}

TEST_CASE("softmax rows sum to one") {
  Rng rng(3);
  const Mlp net(4, {6, 6}, 5, rng);
  const auto p = net.probabilities(noisy_labels(20, 4, 5, 4).vectors.matrix());
  for (Eigen::Index i = 0; i < p.rows(); ++i) CHECK(std::abs(p.row(i).sum() - 1.0) <= 1e-9);
}

TEST_CASE("gradient check") {
  const auto data = noisy_labels(16, 6, 3, 5);
  SUBCASE("fresh two-layer network") {
    Rng rng(6);
    const Mlp net(6, {10, 10}, 3, rng);
    CHECK(gradient_check(net, data.vectors.matrix(), data.labels, 300, 1) <= 1e-4);
  }
  SUBCASE("trained network") {
    MlpConfig cfg;
    cfg.layer_widths = {12, 12, 12, 12};
    cfg.epochs = 20;
    cfg.seed = 2;
    const auto trained = train_mlp(data, {}, cfg);
    CHECK(gradient_check(trained.model, data.vectors.matrix(), data.labels, 300, 2) <= 1e-4);
  }
  SUBCASE("zero weights give zero hidden gradients") {
    std::vector<DenseLayer> layers{{Eigen::MatrixXd::Zero(4, 6), Vector::Zero(4)},
                                   {Eigen::MatrixXd::Zero(3, 4), Vector::Zero(3)}};
    const Mlp zero(layers);
    std::vector<DenseLayer> grads;
    zero.loss(data.vectors.matrix(), data.labels, &grads);
    CHECK(grads[0].weights.cwiseAbs().maxCoeff() == 0.0);
    CHECK(grads[1].weights.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("training") {
  SUBCASE("separable blobs") {
    const auto data = testing_support::blobs(100, 2, 8.0, 11);
    MlpConfig cfg;
    cfg.layer_widths = {16, 16};
    cfg.epochs = 30;
    cfg.seed = 1;
    const auto t = train_mlp(data, data, cfg);
    CHECK(t.report.train_accuracy >= 0.99);
    CHECK(t.report.loss_curve.size() == 30);
    CHECK(t.report.loss_curve.back() < t.report.loss_curve.front());
  }
  SUBCASE("zero epochs is chance level") {
    const auto data = testing_support::blobs(200, 2, 8.0, 12);
    MlpConfig cfg;
    cfg.layer_widths = {8};
    cfg.epochs = 0;
    const auto t = train_mlp(data, data, cfg);
    CHECK(t.report.train_accuracy == doctest::Approx(0.5).epsilon(0.5));
    CHECK(t.report.loss_curve.empty());
  }
  SUBCASE("deterministic per seed") {
    const auto data = noisy_labels(60, 4, 3, 13);
    MlpConfig cfg;
    cfg.layer_widths = {8, 8};
    cfg.epochs = 5;
    cfg.seed = 9;
    const auto a = train_mlp(data, data, cfg);
    const auto b = train_mlp(data, data, cfg);
    CHECK(a.report.loss_curve == b.report.loss_curve);
    CHECK(a.model.layers()[0].weights == b.model.layers()[0].weights);
  }
  SUBCASE("divergence is reported with its epoch") {
    const auto data = testing_support::blobs(20, 2, 1e150, 14);
    MlpConfig cfg;
    cfg.layer_widths = {4};
    cfg.epochs = 3;
    cfg.lr = 1e100;
    try {
      train_mlp(data, {}, cfg);
      FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
      CHECK(e.epoch() >= 0);
    }
  }
  SUBCASE("input checks") {
    auto data = noisy_labels(10, 3, 1, 15);
    CHECK_THROWS_AS(train_mlp(data, {}, MlpConfig{}), InputError);
    MlpConfig cfg;
    cfg.layer_widths = {};
    CHECK_THROWS_AS(cfg.validate(), InputError);
  }
}

TEST_CASE("checkpoint round trip") {
  Rng rng(21);
  const Mlp net(7, {5, 4}, 3, rng);
  const auto path = tmp_path("net.mlpc");
  net.save(path);
  const Mlp back = Mlp::load(path);
  REQUIRE(back.layers().size() == net.layers().size());
  for (Index i = 0; i < net.layers().size(); ++i) {
    CHECK(back.layers()[i].weights == net.layers()[i].weights);
    CHECK(back.layers()[i].bias == net.layers()[i].bias);
  }
  {
    std::ofstream bad(tmp_path("bad.mlpc"), std::ios::binary);
    bad << "NOPE";
  }
  CHECK_THROWS_AS(Mlp::load(tmp_path("bad.mlpc")), ParseError);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
  CHECK_THROWS_AS(Mlp::load(path), ParseError);
  CHECK_THROWS_AS(Mlp::load(tmp_path("missing.mlpc")), IoError);
}

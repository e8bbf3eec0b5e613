#pragma once

#include "acthull/dataset.hpp"
#include "acthull/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace acthull {

/// Fully connected ReLU network trained with Adam on softmax cross-entropy.
struct MlpConfig {
  std::vector<Index> layer_widths{64, 64, 64, 64};
  /// 0 means one more than the largest training label.
  int n_classes = 0;
  double lr = 1e-3;
  Index epochs = 30;
  Index batch_size = 32;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Vector bias;              // out
};

class Mlp {
 public:
  Mlp() = default;
  /// He-initialized network: input -> hidden widths (ReLU) -> n_classes logits.
  Mlp(Index input_dim, const std::vector<Index>& hidden, Index n_classes, Rng& rng);
  explicit Mlp(std::vector<DenseLayer> layers);

  Index input_dim() const;
  Index n_classes() const;
  /// Number of hidden (ReLU) layers.
  Index hidden_layers() const { return layers_.empty() ? 0 : layers_.size() - 1; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  /// Row-wise softmax probabilities, n x n_classes.
  Eigen::MatrixXd probabilities(const RowMatrix& x) const;
  std::vector<int> predict(const RowMatrix& x) const;
  double accuracy(const LabeledVectors& data) const;

  /// Output of hidden layer `layer` (1-based), after the ReLU unless
  /// `pre_activation` is set.
  RowMatrix layer_output(const RowMatrix& x, Index layer, bool pre_activation = false) const;

  /// Mean cross-entropy over the rows; fills `grads` (same shapes as the
  /// layers) when non-null.
  double loss(const RowMatrix& x, std::span<const int> labels, std::vector<DenseLayer>* grads = nullptr) const;

  Index parameter_count() const;
  /// Flat parameter view: each layer's weights row-major, then its bias.
  double& parameter(Index i);

  void save(const std::string& path) const;
  static Mlp load(const std::string& path);

 private:
  std::vector<DenseLayer> layers_;
};

struct TrainReport {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  /// Mean minibatch loss per epoch.
  std::vector<double> loss_curve;
  std::uint64_t seed = 0;
  Index epochs = 0;
};

struct TrainedMlp {
  Mlp model;
  TrainReport report;
};

/// Minibatch Adam training, deterministic per seed. Throws DivergenceError
/// on a non-finite loss.
TrainedMlp train_mlp(const LabeledVectors& train, const LabeledVectors& test, const MlpConfig& cfg);

/// Per-layer activation vectors of one split.
struct ActivationSet {
  Index layer_index = 0;  // 1-based hidden layer
  std::string split;      // "train" or "test"
  LabeledVectors data;
};

ActivationSet extract_activations(const Mlp& model, const LabeledVectors& data, Index layer,
                                  const std::string& split = "train", bool pre_activation = false);

/// Max relative error between backprop and central differences (step 1e-5)
/// over `samples` randomly chosen parameters.
double gradient_check(const Mlp& model, const RowMatrix& x, std::span<const int> labels, Index samples = 200,
                      std::uint64_t seed = 0);

}  // namespace acthull

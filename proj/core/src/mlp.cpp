#include "acthull/mlp.hpp"

#include "acthull/errors.hpp"
#include "acthull/parallel.hpp"
#include "binary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace acthull {

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;
constexpr char kCheckpointMagic[4] = {'M', 'L', 'P', 'C'};
// Inference runs in fixed row blocks so results never depend on thread count.
constexpr Index kInferenceBlock = 256;

Eigen::MatrixXd affine(const Eigen::MatrixXd& x, const DenseLayer& layer) {
  Eigen::MatrixXd z = x * layer.weights.transpose();
  z.rowwise() += layer.bias.transpose();
  return z;
}

// Row-wise softmax in place, shifted by the row max.
void softmax_rows(Eigen::MatrixXd& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    auto row = z.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

template <typename Fn>
RowMatrix blockwise(const RowMatrix& x, Index out_cols, Fn&& fn) {
  const auto n = static_cast<Index>(x.rows());
  RowMatrix out(x.rows(), static_cast<Eigen::Index>(out_cols));
  const Index blocks = (n + kInferenceBlock - 1) / kInferenceBlock;
  parallel_for(blocks, [&](Index b) {
    const auto lo = static_cast<Eigen::Index>(b * kInferenceBlock);
    const auto len = static_cast<Eigen::Index>(std::min(kInferenceBlock, n - b * kInferenceBlock));
    out.middleRows(lo, len) = fn(Eigen::MatrixXd(x.middleRows(lo, len)));
  });
  return out;
}

int argmax_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  Eigen::Index best = 0;
  row.maxCoeff(&best);  // first maximum wins
  return static_cast<int>(best);
}

}  // namespace

void MlpConfig::validate() const {
  if (layer_widths.empty()) throw InputError("MLP needs at least one hidden layer");
  for (Index w : layer_widths) {
    if (w < 1) throw InputError("MLP layer widths must be >= 1");
  }
  if (n_classes < 0) throw InputError("n_classes must be >= 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw InputError("learning rate must be positive");
  if (batch_size < 1) throw InputError("batch size must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw InputError("Adam betas must be in [0, 1)");
  if (!(adam_eps > 0.0)) throw InputError("Adam epsilon must be positive");
}

Mlp::Mlp(Index input_dim, const std::vector<Index>& hidden, Index n_classes, Rng& rng) {
  if (input_dim < 1 || n_classes < 1 || hidden.empty()) throw InputError("invalid MLP shape");
  Index fan_in = input_dim;
  auto add = [&](Index out) {
    DenseLayer layer{Eigen::MatrixXd(out, fan_in), Vector::Zero(static_cast<Eigen::Index>(out))};
    const double sd = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = rng.normal(0.0, sd);
    }
    layers_.push_back(std::move(layer));
    fan_in = out;
  };
  for (Index w : hidden) add(w);
  add(n_classes);
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.size() < 2) throw InputError("MLP needs a hidden layer and an output layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.weights.rows() != l.bias.size()) throw InputError("layer " + std::to_string(i) + ": bias size mismatch");
    if (i > 0 && l.weights.cols() != layers_[i - 1].weights.rows()) {
      throw InputError("layer " + std::to_string(i) + ": input width mismatch");
    }
  }
}

Index Mlp::input_dim() const { return layers_.empty() ? 0 : static_cast<Index>(layers_.front().weights.cols()); }
Index Mlp::n_classes() const { return layers_.empty() ? 0 : static_cast<Index>(layers_.back().weights.rows()); }

Eigen::MatrixXd Mlp::probabilities(const RowMatrix& x) const {
  if (static_cast<Index>(x.cols()) != input_dim()) throw InputError("input dimension does not match the model");
  RowMatrix p = blockwise(x, n_classes(), [&](Eigen::MatrixXd h) {
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) h = affine(h, layers_[i]).cwiseMax(0.0);
    Eigen::MatrixXd z = affine(h, layers_.back());
    softmax_rows(z);
    return z;
  });
  return p;
}

std::vector<int> Mlp::predict(const RowMatrix& x) const {
  const Eigen::MatrixXd p = probabilities(x);
  std::vector<int> out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) out[static_cast<std::size_t>(i)] = argmax_row(p.row(i));
  return out;
}

double Mlp::accuracy(const LabeledVectors& data) const {
  if (data.size() == 0) return 0.0;
  const auto pred = predict(data.vectors.matrix());
  Index hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == data.labels[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

RowMatrix Mlp::layer_output(const RowMatrix& x, Index layer, bool pre_activation) const {
  if (layer < 1 || layer > hidden_layers()) {
    throw InputError("layer " + std::to_string(layer) + " out of range 1.." + std::to_string(hidden_layers()));
  }
  if (static_cast<Index>(x.cols()) != input_dim()) throw InputError("input dimension does not match the model");
  const auto width = static_cast<Index>(layers_[layer - 1].weights.rows());
  return blockwise(x, width, [&](Eigen::MatrixXd h) {
    for (Index i = 0; i < layer; ++i) {
      h = affine(h, layers_[i]);
      if (i + 1 < layer || !pre_activation) h = h.cwiseMax(0.0);
    }
    return h;
  });
}

double Mlp::loss(const RowMatrix& x, std::span<const int> labels, std::vector<DenseLayer>* grads) const {
  const auto n = x.rows();
  if (n == 0 || static_cast<std::size_t>(n) != labels.size()) throw InputError("loss needs one label per row");
  const std::size_t depth = layers_.size();

  std::vector<Eigen::MatrixXd> acts;  // acts[i] is the input of layer i
  acts.reserve(depth);
  acts.emplace_back(x);
  for (std::size_t i = 0; i + 1 < depth; ++i) acts.push_back(affine(acts.back(), layers_[i]).cwiseMax(0.0));
  Eigen::MatrixXd p = affine(acts.back(), layers_.back());
  softmax_rows(p);

  double total = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const int y = labels[static_cast<std::size_t>(r)];
    if (y < 0 || y >= p.cols()) throw InputError("label " + std::to_string(y) + " outside the output layer");
    total -= std::log(std::max(p(r, y), 1e-300));
  }
  const double mean = total / static_cast<double>(n);
  if (grads == nullptr) return mean;

  grads->resize(depth);
  Eigen::MatrixXd delta = p;  // dL/dlogits
  for (Eigen::Index r = 0; r < n; ++r) delta(r, labels[static_cast<std::size_t>(r)]) -= 1.0;
  delta /= static_cast<double>(n);
  for (std::size_t i = depth; i-- > 0;) {
    (*grads)[i].weights = delta.transpose() * acts[i];
    (*grads)[i].bias = delta.colwise().sum().transpose();
    if (i > 0) {
      Eigen::MatrixXd back = delta * layers_[i].weights;
      delta = (acts[i].array() > 0.0).select(back, 0.0);
    }
  }
  return mean;
}

Index Mlp::parameter_count() const {
  Index total = 0;
  for (const auto& l : layers_) total += static_cast<Index>(l.weights.size() + l.bias.size());
  return total;
}

double& Mlp::parameter(Index i) {
  for (auto& l : layers_) {
    const auto w = static_cast<Index>(l.weights.size());
    if (i < w) {
      const auto cols = static_cast<Index>(l.weights.cols());
      return l.weights(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols));
    }
    i -= w;
    if (i < static_cast<Index>(l.bias.size())) return l.bias(static_cast<Eigen::Index>(i));
    i -= static_cast<Index>(l.bias.size());
  }
  throw InputError("parameter index out of range");
}

void Mlp::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kCheckpointMagic, 4);
  detail::write_le<std::uint32_t>(out, kCheckpointVersion);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(layers_.size()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(input_dim()));
  for (const auto& l : layers_) detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(l.weights.rows()));
  for (const auto& l : layers_) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) detail::write_le<double>(out, l.weights(r, c));
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) detail::write_le<double>(out, l.bias(r));
  }
  if (!out) throw IoError("short write to " + path);
}

Mlp Mlp::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || !std::equal(magic, magic + 4, kCheckpointMagic)) {
    throw ParseError(path + ": bad magic at byte 0 (expected MLPC)");
  }
  const auto version = detail::read_le<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw ParseError(path + ": unsupported checkpoint version " + std::to_string(version) + " at byte 4");
  }
  const auto count = detail::read_le<std::uint32_t>(in, path);
  if (count < 2 || count > 1024) throw ParseError(path + ": implausible layer count " + std::to_string(count));
  std::vector<std::uint32_t> dims(count + 1);
  for (auto& d : dims) {
    d = detail::read_le<std::uint32_t>(in, path);
    if (d == 0) throw ParseError(path + ": zero layer width");
  }
  std::vector<DenseLayer> layers(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    auto& l = layers[i];
    l.weights.resize(dims[i + 1], dims[i]);
    l.bias.resize(dims[i + 1]);
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) l.weights(r, c) = detail::read_le<double>(in, path);
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = detail::read_le<double>(in, path);
  }
  if (in.peek() != std::ifstream::traits_type::eof()) throw ParseError(path + ": trailing bytes after checkpoint");
  return Mlp(std::move(layers));
}

TrainedMlp train_mlp(const LabeledVectors& train, const LabeledVectors& test, const MlpConfig& cfg) {
  cfg.validate();
  train.validate();
  if (train.size() == 0) throw InputError("empty training set");
  if (test.size() > 0) {
    test.validate();
    if (test.dim() != train.dim()) throw InputError("train and test dimensions differ");
  }
  const int classes = cfg.n_classes > 0 ? cfg.n_classes : std::max(train.n_classes(), test.n_classes());
  std::vector<bool> present(static_cast<std::size_t>(classes), false);
  for (int y : train.labels) {
    if (y >= classes) throw InputError("label " + std::to_string(y) + " exceeds n_classes");
    present[static_cast<std::size_t>(y)] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2) throw InputError("training needs at least 2 classes");

  Rng rng(cfg.seed);
  TrainedMlp out{Mlp(train.dim(), cfg.layer_widths, static_cast<Index>(classes), rng), {}};
  Mlp& net = out.model;
  auto& layers = net.layers();

  std::vector<DenseLayer> m1(layers.size()), m2(layers.size()), grads;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    m1[i] = {Eigen::MatrixXd::Zero(layers[i].weights.rows(), layers[i].weights.cols()),
             Vector::Zero(layers[i].bias.size())};
    m2[i] = m1[i];
  }

  const Index n = train.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  RowMatrix batch;
  std::vector<int> batch_labels;
  long long step = 0;
  for (Index epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    Index batches = 0;
    for (Index lo = 0; lo < n; lo += cfg.batch_size) {
      const Index len = std::min(cfg.batch_size, n - lo);
      batch.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(train.dim()));
      batch_labels.resize(len);
      for (Index j = 0; j < len; ++j) {
        batch.row(static_cast<Eigen::Index>(j)) = train.vectors.row(order[lo + j]).transpose();
        batch_labels[j] = train.labels[order[lo + j]];
      }
      const double l = net.loss(batch, batch_labels, &grads);
      if (!std::isfinite(l)) {
        throw DivergenceError("training loss became non-finite in epoch " + std::to_string(epoch),
                              static_cast<int>(epoch));
      }
      epoch_loss += l;
      ++batches;

      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      auto adam = [&](auto& param, auto& g, auto& a, auto& b) {
        a = cfg.beta1 * a + (1.0 - cfg.beta1) * g;
        b = cfg.beta2 * b + (1.0 - cfg.beta2) * g.cwiseProduct(g);
        param.array() -= cfg.lr * (a.array() / c1) / ((b.array() / c2).sqrt() + cfg.adam_eps);
      };
      for (std::size_t i = 0; i < layers.size(); ++i) {
        adam(layers[i].weights, grads[i].weights, m1[i].weights, m2[i].weights);
        adam(layers[i].bias, grads[i].bias, m1[i].bias, m2[i].bias);
      }
    }
    out.report.loss_curve.push_back(epoch_loss / static_cast<double>(batches));
  }

  out.report.train_accuracy = net.accuracy(train);
  out.report.test_accuracy = test.size() > 0 ? net.accuracy(test) : 0.0;
  out.report.seed = cfg.seed;
  out.report.epochs = cfg.epochs;
  return out;
}

ActivationSet extract_activations(const Mlp& model, const LabeledVectors& data, Index layer, const std::string& split,
                                  bool pre_activation) {
  ActivationSet acts;
  acts.layer_index = layer;
  acts.split = split;
  acts.data.vectors = PointSet(model.layer_output(data.vectors.matrix(), layer, pre_activation));
  acts.data.labels = data.labels;
  acts.data.class_names = data.class_names;
  return acts;
}

double gradient_check(const Mlp& model, const RowMatrix& x, std::span<const int> labels, Index samples,
                      std::uint64_t seed) {
  if (x.rows() == 0) throw InputError("gradient check needs a nonempty batch");
  constexpr double kStep = 1e-5;
  // Below this magnitude both gradients count as zero; central differences
  // carry ~1e-10 absolute noise at this step.
  constexpr double kFloor = 1e-6;

  std::vector<DenseLayer> grads;
  model.loss(x, labels, &grads);
  Mlp analytic(grads);
  Mlp probe = model;

  Rng rng(seed);
  const Index total = probe.parameter_count();
  const Index count = std::min(samples, total);
  double worst = 0.0;
  for (Index s = 0; s < count; ++s) {
    const Index i = count == total ? s : static_cast<Index>(rng.index(total));
    double& p = probe.parameter(i);
    const double saved = p;
    p = saved + kStep;
    const double up = probe.loss(x, labels);
    p = saved - kStep;
    const double down = probe.loss(x, labels);
    p = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    const double exact = analytic.parameter(i);
    const double denom = std::max({std::abs(numeric), std::abs(exact), kFloor});
    worst = std::max(worst, std::abs(numeric - exact) / denom);
  }
  return worst;
}

}  // namespace acthull

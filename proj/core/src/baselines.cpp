#include "acthull/baselines.hpp"

#include "acthull/errors.hpp"
#include "acthull/parallel.hpp"
#include "acthull/rng.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace acthull {

namespace {

double accuracy_of(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (truth.empty()) return 0.0;
  Index hits = 0;
  for (Index i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

int row_argmax(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  Eigen::Index best = 0;
  row.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

std::vector<Index> nearest_neighbors(const PointSet& train, const Eigen::Ref<const Vector>& query, Index k,
                                     Index exclude) {
  if (static_cast<Index>(query.size()) != train.dim()) throw InputError("query dimension does not match training set");
  const Index available = train.size() - (exclude < train.size() ? 1 : 0);
  if (k < 1 || k > available) {
    throw InputError("k=" + std::to_string(k) + " but only " + std::to_string(available) + " neighbors available");
  }
  std::vector<std::pair<double, Index>> cand;
  cand.reserve(train.size());
  for (Index j = 0; j < train.size(); ++j) {
    if (j != exclude) cand.emplace_back((train.row(j) - query).squaredNorm(), j);
  }
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  std::vector<Index> out(k);
  for (Index j = 0; j < k; ++j) out[j] = cand[j].second;
  return out;
}

int majority_vote(const std::vector<int>& labels, std::span<const Index> neighbors) {
  if (neighbors.empty()) throw InputError("vote needs at least one neighbor");
  int top = 0;
  for (Index j : neighbors) top = std::max(top, labels[j]);
  std::vector<Index> votes(static_cast<Index>(top) + 1, 0);
  for (Index j : neighbors) ++votes[static_cast<Index>(labels[j])];
  return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

BaselineResult knn_baseline(const LabeledVectors& train, const LabeledVectors& test, Index k) {
  train.validate();
  if (k < 1) throw InputError("k must be >= 1");
  if (k + 1 > train.size()) {
    throw InputError("k=" + std::to_string(k) + " needs at least " + std::to_string(k + 1) +
                     " training rows for leave-one-out");
  }
  if (test.size() > 0 && test.dim() != train.dim()) throw InputError("train and test dimensions differ");

  std::vector<int> loo(train.size()), held(test.size());
  parallel_for(train.size(), [&](Index i) {
    loo[i] = majority_vote(train.labels, nearest_neighbors(train.vectors, train.vectors.row(i), k, i));
  });
  parallel_for(test.size(), [&](Index i) {
    held[i] = majority_vote(train.labels, nearest_neighbors(train.vectors, test.vectors.row(i), k));
  });
  return {accuracy_of(loo, train.labels), accuracy_of(held, test.labels)};
}

void LogRegConfig::validate() const {
  if (!(lr > 0.0)) throw InputError("logistic regression learning rate must be positive");
  if (max_iters < 1) throw InputError("max_iters must be >= 1");
  if (!(tol >= 0.0)) throw InputError("tol must be >= 0");
  if (!(l2 >= 0.0)) throw InputError("l2 must be >= 0");
  if (!(init_scale >= 0.0)) throw InputError("init_scale must be >= 0");
}

LogisticRegression::LogisticRegression(Index dim, Index n_classes)
    : w_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_classes), static_cast<Eigen::Index>(dim))),
      b_(Vector::Zero(static_cast<Eigen::Index>(n_classes))) {}

LogisticRegression::LogisticRegression(Eigen::MatrixXd weights, Vector bias) : w_(std::move(weights)), b_(std::move(bias)) {
  if (w_.rows() != b_.size()) throw InputError("bias length must equal the number of classes");
}

double LogisticRegression::loss(const RowMatrix& x, std::span<const int> labels, double l2, Eigen::MatrixXd* grad_w,
                                Vector* grad_b) const {
  const auto n = x.rows();
  if (n == 0 || static_cast<std::size_t>(n) != labels.size()) throw InputError("loss needs one label per row");
  if (x.cols() != w_.cols()) throw InputError("input dimension does not match the model");
  Eigen::MatrixXd p = x * w_.transpose();
  p.rowwise() += b_.transpose();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto row = p.row(i);
    const double shift = row.maxCoeff();
    row = (row.array() - shift).exp().matrix();
    const double z = row.sum();
    row /= z;
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= p.cols()) throw InputError("label " + std::to_string(y) + " outside the model's classes");
    total -= std::log(std::max(row(y), 1e-300));
  }
  const double mean = total / static_cast<double>(n) + 0.5 * l2 * w_.squaredNorm();
  if (grad_w != nullptr || grad_b != nullptr) {
    for (Eigen::Index i = 0; i < n; ++i) p(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
    p /= static_cast<double>(n);
    if (grad_w != nullptr) *grad_w = p.transpose() * x + l2 * w_;
    if (grad_b != nullptr) *grad_b = p.colwise().sum().transpose();
  }
  return mean;
}

std::vector<int> LogisticRegression::predict(const RowMatrix& x) const {
  if (x.cols() != w_.cols()) throw InputError("input dimension does not match the model");
  Eigen::MatrixXd z = x * w_.transpose();
  z.rowwise() += b_.transpose();
  std::vector<int> out(static_cast<std::size_t>(z.rows()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) out[static_cast<std::size_t>(i)] = row_argmax(z.row(i));
  return out;
}

LogisticRegression train_logreg(const LabeledVectors& train, const LogRegConfig& cfg, Index n_classes) {
  cfg.validate();
  train.validate();
  const Index classes = std::max<Index>(n_classes, static_cast<Index>(train.n_classes()));
  if (classes < 2) throw InputError("logistic regression needs at least 2 classes");

  LogisticRegression model(train.dim(), classes);
  if (cfg.init_scale > 0.0) {
    Rng rng(cfg.seed);
    auto& w = model.weights();
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.normal(0.0, cfg.init_scale);
    }
  }
  Eigen::MatrixXd gw;
  Vector gb;
  const auto& x = train.vectors.matrix();
  for (Index it = 0; it < cfg.max_iters; ++it) {
    const double l = model.loss(x, train.labels, cfg.l2, &gw, &gb);
    if (!std::isfinite(l)) {
      throw DivergenceError("logistic regression loss became non-finite at iteration " + std::to_string(it),
                            static_cast<int>(it));
    }
    if (std::max(gw.cwiseAbs().maxCoeff(), gb.cwiseAbs().maxCoeff()) <= cfg.tol) break;
    model.weights() -= cfg.lr * gw;
    model.bias() -= cfg.lr * gb;
  }
  return model;
}

BaselineResult logreg_baseline(const LabeledVectors& train, const LabeledVectors& test, const LogRegConfig& cfg) {
  if (test.size() > 0 && test.dim() != train.dim()) throw InputError("train and test dimensions differ");
  const auto model = train_logreg(train, cfg, static_cast<Index>(std::max(train.n_classes(), test.n_classes())));
  BaselineResult r;
  r.train_accuracy = accuracy_of(model.predict(train.vectors.matrix()), train.labels);
  if (test.size() > 0) r.test_accuracy = accuracy_of(model.predict(test.vectors.matrix()), test.labels);
  return r;
}

double logreg_gradient_check(const LogisticRegression& model, const RowMatrix& x, std::span<const int> labels,
                             double l2, Index samples, std::uint64_t seed) {
  constexpr double kStep = 1e-5;
  constexpr double kFloor = 1e-6;
  Eigen::MatrixXd gw;
  Vector gb;
  model.loss(x, labels, l2, &gw, &gb);

  LogisticRegression probe = model;
  const auto nw = static_cast<Index>(gw.size());
  const Index total = nw + static_cast<Index>(gb.size());
  const Index count = std::min(samples, total);
  Rng rng(seed);
  double worst = 0.0;
  for (Index s = 0; s < count; ++s) {
    const Index i = count == total ? s : static_cast<Index>(rng.index(total));
    const auto cols = static_cast<Index>(gw.cols());
    double& p = i < nw ? probe.weights()(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols))
                       : probe.bias()(static_cast<Eigen::Index>(i - nw));
    const double exact = i < nw ? gw(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols))
                                : gb(static_cast<Eigen::Index>(i - nw));
    const double saved = p;
    p = saved + kStep;
    const double up = probe.loss(x, labels, l2);
    p = saved - kStep;
    const double down = probe.loss(x, labels, l2);
    p = saved;
    const double numeric = (up - down) / (2.0 * kStep);
    worst = std::max(worst, std::abs(numeric - exact) / std::max({std::abs(numeric), std::abs(exact), kFloor}));
  }
  return worst;
}

}  // namespace acthull

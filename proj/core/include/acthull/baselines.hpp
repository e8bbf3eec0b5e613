#pragma once

#include "acthull/dataset.hpp"

#include <cstdint>

namespace acthull {

struct BaselineResult {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

/// Indices of the k nearest training rows to `query`, nearest first; ties in
/// distance go to the lower index. `exclude` (if < size) is left out.
std::vector<Index> nearest_neighbors(const PointSet& train, const Eigen::Ref<const Vector>& query, Index k,
                                     Index exclude = static_cast<Index>(-1));

/// Majority label among `neighbors`; ties go to the lowest class.
int majority_vote(const std::vector<int>& labels, std::span<const Index> neighbors);

/// Euclidean KNN. Training accuracy is leave-one-out.
BaselineResult knn_baseline(const LabeledVectors& train, const LabeledVectors& test, Index k = 5);

struct LogRegConfig {
  double lr = 0.5;
  Index max_iters = 500;
  /// Stop once the gradient's max-abs entry falls below this.
  double tol = 1e-5;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  /// Stddev of the initial weights; 0 starts from zero.
  double init_scale = 0.0;

  void validate() const;
};

/// Multinomial logistic regression: logits = W x + b.
class LogisticRegression {
 public:
  LogisticRegression(Index dim, Index n_classes);
  LogisticRegression(Eigen::MatrixXd weights, Vector bias);

  const Eigen::MatrixXd& weights() const { return w_; }
  const Vector& bias() const { return b_; }
  Eigen::MatrixXd& weights() { return w_; }
  Vector& bias() { return b_; }

  /// Mean cross-entropy plus 0.5 * l2 * |W|^2; gradients when requested.
  double loss(const RowMatrix& x, std::span<const int> labels, double l2, Eigen::MatrixXd* grad_w = nullptr,
              Vector* grad_b = nullptr) const;
  std::vector<int> predict(const RowMatrix& x) const;

 private:
  Eigen::MatrixXd w_;  // classes x dim
  Vector b_;
};

/// Full-batch gradient descent. Throws DivergenceError on a non-finite loss.
LogisticRegression train_logreg(const LabeledVectors& train, const LogRegConfig& cfg, Index n_classes = 0);

BaselineResult logreg_baseline(const LabeledVectors& train, const LabeledVectors& test, const LogRegConfig& cfg = {});

/// Max relative error of the analytic gradient against central differences
/// (step 1e-5) over `samples` random parameters.
double logreg_gradient_check(const LogisticRegression& model, const RowMatrix& x, std::span<const int> labels,
                             double l2, Index samples = 200, std::uint64_t seed = 0);

}  // namespace acthull

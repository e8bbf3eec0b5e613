#pragma once

#include "acthull/dataset.hpp"
#include "acthull/hull_builder.hpp"
#include "acthull/mlp.hpp"

#include <string>
#include <vector>

namespace acthull {

/// One approximate hull per class, built from training vectors.
struct NearestHullModel {
  std::vector<int> classes;                     // ascending
  std::vector<PointSet> vertex_sets;            // aligned with `classes`
  std::vector<std::vector<Index>> vertex_rows;  // training rows of each vertex set
  std::vector<HullApprox> builds;               // telemetry, indices local to the class
  SolverConfig solver;
  BuilderConfig builder;
  /// Largest class diameter; distances within solver.zero_tol * scale tie.
  double scale = 0.0;

  Index dim() const { return vertex_sets.empty() ? 0 : vertex_sets.front().dim(); }
};

/// Builds each class hull with build_revised_ge. Needs >= 2 classes.
NearestHullModel fit_nearest_hull(const LabeledVectors& train, const BuilderConfig& builder);

struct Prediction {
  int label = 0;
  std::vector<double> distances;  // aligned with model.classes
  /// More than one class lies within the tie tolerance of the minimum.
  bool tie = false;
};

Prediction predict(const NearestHullModel& model, const Eigen::Ref<const Vector>& v);
std::vector<Prediction> predict_all(const NearestHullModel& model, const LabeledVectors& data);
double accuracy(const std::vector<Prediction>& predictions, std::span<const int> labels);

enum class LooMode {
  /// Own-class distance uses the stored vertex set minus the held-out row.
  vertex_sets,
  /// Own-class hull is rebuilt from the class without the held-out row.
  rebuild,
};

struct LooReport {
  double accuracy = 0.0;
  Index evaluated = 0;
  /// Rows of single-member classes, which cannot be held out.
  std::vector<Index> skipped;
};

/// Leave-one-out accuracy of `train`, which must be the set the model was fit on.
LooReport loo_train_accuracy(const NearestHullModel& model, const LabeledVectors& train,
                             LooMode mode = LooMode::vertex_sets);

struct LayerAccuracy {
  Index layer_index = 0;
  double train_accuracy = 0.0;  // leave-one-out
  double test_accuracy = 0.0;
};

struct GapRow {
  Index layer_index = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double gap = 0.0;
  /// gap / MLP gap; NaN when the MLP gap is zero.
  double gap_ratio = 0.0;
  bool below_mlp_gap = false;
};

struct GapReport {
  std::vector<GapRow> layers;
  double mlp_train_accuracy = 0.0;
  double mlp_test_accuracy = 0.0;
  double mlp_gap = 0.0;
  /// Test accuracy never increases from one layer to the next.
  bool test_monotone_decreasing = true;
};

GapReport gap_report(std::span<const LayerAccuracy> layers, const TrainReport& mlp);

}  // namespace acthull

#include "acthull/classification.hpp"

#include "acthull/errors.hpp"
#include "acthull/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace acthull {

namespace {

std::vector<Index> iota_indices(Index n) {
  std::vector<Index> out(n);
  std::iota(out.begin(), out.end(), Index{0});
  return out;
}

double distance_to(const PointSet& members, const Eigen::Ref<const Vector>& v, const SolverConfig& cfg,
                   double scale) {
  const auto all = iota_indices(members.size());
  return project_onto_hull(members, all, v, cfg, scale).distance;
}

Prediction decide(const NearestHullModel& model, std::vector<double> distances) {
  Prediction p;
  const auto best = std::min_element(distances.begin(), distances.end());
  const double tol = model.solver.zero_tol * model.scale;
  Index winner = distances.size();
  Index tied = 0;
  for (Index c = 0; c < distances.size(); ++c) {
    if (distances[c] <= *best + tol) {
      if (winner == distances.size()) winner = c;
      ++tied;
    }
  }
  p.label = model.classes[winner];
  p.tie = tied > 1;
  p.distances = std::move(distances);
  return p;
}

Index class_slot(const NearestHullModel& model, int label) {
  const auto it = std::lower_bound(model.classes.begin(), model.classes.end(), label);
  if (it == model.classes.end() || *it != label) {
    throw InputError("label " + std::to_string(label) + " is not a class of the model");
  }
  return static_cast<Index>(it - model.classes.begin());
}

}  // namespace

NearestHullModel fit_nearest_hull(const LabeledVectors& train, const BuilderConfig& builder) {
  builder.validate();
  train.validate();
  NearestHullModel model;
  model.builder = builder;
  model.solver = builder.solver;
  for (Index c = 0; c < static_cast<Index>(train.n_classes()); ++c) {
    if (!train.indices_of(static_cast<int>(c)).empty()) model.classes.push_back(static_cast<int>(c));
  }
  if (model.classes.size() < 2) throw InputError("nearest-hull classification needs at least 2 classes");

  const Index k = model.classes.size();
  model.vertex_sets.resize(k);
  model.vertex_rows.resize(k);
  model.builds.resize(k);
  parallel_for(k, [&](Index c) {
    const auto rows = train.indices_of(model.classes[c]);
    const PointSet members = train.vectors.subset(rows);
    HullApprox hull = build_revised_ge(members, builder);
    for (Index local : hull.vertex_indices) model.vertex_rows[c].push_back(rows[local]);
    model.vertex_sets[c] = members.subset(hull.vertex_indices);
    model.builds[c] = std::move(hull);
  });
  for (const auto& b : model.builds) model.scale = std::max(model.scale, b.diameter);
  return model;
}

Prediction predict(const NearestHullModel& model, const Eigen::Ref<const Vector>& v) {
  if (static_cast<Index>(v.size()) != model.dim()) throw InputError("query dimension does not match the model");
  std::vector<double> d(model.classes.size());
  for (Index c = 0; c < d.size(); ++c) d[c] = distance_to(model.vertex_sets[c], v, model.solver, model.builds[c].diameter);
  return decide(model, std::move(d));
}

std::vector<Prediction> predict_all(const NearestHullModel& model, const LabeledVectors& data) {
  std::vector<Prediction> out(data.size());
  parallel_for(data.size(), [&](Index i) { out[i] = predict(model, data.vectors.row(i)); });
  return out;
}

double accuracy(const std::vector<Prediction>& predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw InputError("one label per prediction required");
  if (predictions.empty()) return 0.0;
  Index hits = 0;
  for (Index i = 0; i < labels.size(); ++i) hits += predictions[i].label == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

LooReport loo_train_accuracy(const NearestHullModel& model, const LabeledVectors& train, LooMode mode) {
  train.validate();
  if (train.dim() != model.dim()) throw InputError("training set dimension does not match the model");
  const Index k = model.classes.size();
  std::vector<std::vector<Index>> class_rows(k);
  for (Index c = 0; c < k; ++c) class_rows[c] = train.indices_of(model.classes[c]);

  // 1 correct, 0 wrong, -1 skipped
  std::vector<int> outcome(train.size(), -1);
  parallel_for(train.size(), [&](Index i) {
    const Index own = class_slot(model, train.labels[i]);
    const auto& rows = class_rows[own];
    if (rows.size() < 2) return;
    const auto v = train.vectors.row(i);

    std::vector<double> d(k);
    for (Index c = 0; c < k; ++c) {
      if (c != own) d[c] = distance_to(model.vertex_sets[c], v, model.solver, model.builds[c].diameter);
    }

    std::vector<Index> held_out;  // training rows spanning the own-class hull without i
    if (mode == LooMode::rebuild) {
      std::vector<Index> rest;
      for (Index r : rows) {
        if (r != i) rest.push_back(r);
      }
      const PointSet members = train.vectors.subset(rest);
      for (Index local : build_revised_ge(members, model.builder).vertex_indices) held_out.push_back(rest[local]);
    } else {
      const auto& verts = model.vertex_rows[own];
      if (std::find(verts.begin(), verts.end(), i) == verts.end()) {
        held_out = verts;
      } else {
        for (Index r : verts) {
          if (r != i) held_out.push_back(r);
        }
        // Sole vertex of a class of duplicates: fall back to the rest of the class.
        if (held_out.empty()) {
          for (Index r : rows) {
            if (r != i) held_out.push_back(r);
          }
        }
      }
    }
    d[own] = distance_to(train.vectors.subset(held_out), v, model.solver, model.builds[own].diameter);
    outcome[i] = decide(model, std::move(d)).label == train.labels[i] ? 1 : 0;
  });

  LooReport report;
  Index hits = 0;
  for (Index i = 0; i < outcome.size(); ++i) {
    if (outcome[i] < 0) {
      report.skipped.push_back(i);
    } else {
      ++report.evaluated;
      hits += static_cast<Index>(outcome[i]);
    }
  }
  report.accuracy = report.evaluated > 0 ? static_cast<double>(hits) / static_cast<double>(report.evaluated) : 0.0;
  return report;
}

GapReport gap_report(std::span<const LayerAccuracy> layers, const TrainReport& mlp) {
  if (layers.empty()) throw InputError("gap report needs at least one layer");
  GapReport r;
  r.mlp_train_accuracy = mlp.train_accuracy;
  r.mlp_test_accuracy = mlp.test_accuracy;
  r.mlp_gap = mlp.train_accuracy - mlp.test_accuracy;
  for (Index i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    GapRow row;
    row.layer_index = l.layer_index;
    row.train_accuracy = l.train_accuracy;
    row.test_accuracy = l.test_accuracy;
    row.gap = l.train_accuracy - l.test_accuracy;
    row.gap_ratio = r.mlp_gap != 0.0 ? row.gap / r.mlp_gap : std::numeric_limits<double>::quiet_NaN();
    row.below_mlp_gap = row.gap <= r.mlp_gap;
    if (i > 0 && l.test_accuracy > layers[i - 1].test_accuracy) r.test_monotone_decreasing = false;
    r.layers.push_back(row);
  }
  return r;
}

}  // namespace acthull

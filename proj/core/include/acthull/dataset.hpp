#pragma once

#include "acthull/point_set.hpp"

#include <string>
#include <vector>

namespace acthull {

/// Vectors with an integer class per row.
struct LabeledVectors {
  PointSet vectors;
  std::vector<int> labels;
  std::vector<std::string> class_names;

  Index size() const { return vectors.size(); }
  Index dim() const { return vectors.dim(); }
  /// max(label) + 1, or 0 when empty.
  int n_classes() const;
  /// Rows of class `label`, ascending.
  std::vector<Index> indices_of(int label) const;
  /// Throws InputError unless labels are in [0, n_classes) and lengths match.
  void validate() const;
  LabeledVectors subset(std::span<const Index> rows) const;
  /// First `k` rows (all rows when k >= size()).
  LabeledVectors head(Index k) const;
};

}  // namespace acthull

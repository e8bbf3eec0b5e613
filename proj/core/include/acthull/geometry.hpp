#pragma once

#include "acthull/point_set.hpp"

#include <vector>

namespace acthull {

/// Euclidean distance between two vectors of equal dimension.
double pairwise_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

struct Diameter {
  double value = 0.0;
  /// False when the set exceeded kExactDiameterLimit and `value` is the
  /// two-sweep farthest-point lower bound.
  bool exact = true;
};

inline constexpr Index kExactDiameterLimit = 2000;

/// Largest pairwise distance; exact up to kExactDiameterLimit points.
Diameter diameter(const PointSet& points);

/// Indices of the strict vertices of the exact 2D convex hull, ascending.
///
/// Collinear boundary points are excluded. Among coincident points only the
/// lowest index can be reported. Used as a test oracle for the builders.
std::vector<Index> exact_extremes_2d(const PointSet& points);

}  // namespace acthull

#pragma once

#include "acthull/errors.hpp"
#include "acthull/point_set.hpp"

#include <optional>
#include <span>

namespace acthull {

/// Tolerances for the simplex-constrained distance QP.
struct SolverConfig {
  /// Relative duality-gap target: gap <= gap_tol * max(|r|^2, zero_tol * scale^2).
  /// The floor keeps interior points from chasing a zero objective forever.
  double gap_tol = 1e-8;
  /// "Distance is zero" threshold as a fraction of diameter(candidates + v).
  double zero_tol = 1e-7;
  /// Major+minor iteration cap; unset means 10*m + 1000.
  std::optional<Index> max_iters;

  void validate() const;
  Index iteration_cap(Index m) const { return max_iters.value_or(10 * m + 1000); }
};

/// Convex weights over a candidate set: alpha >= 0 and sum(alpha) == 1.
struct SimplexWeights {
  Vector alpha;

  bool feasible(double tol = 1e-9) const;
};

/// Solution of min_alpha |v - sum alpha_i x_i| over the probability simplex.
struct ProjectionResult {
  SimplexWeights weights;
  Vector nearest_point;
  double distance = 0.0;
  /// Certified Frank-Wolfe gap, relative (see SolverConfig::gap_tol).
  double solver_gap = 0.0;
  /// Absolute Frank-Wolfe gap max_i <r, x_i - nearest>, r = v - nearest.
  double absolute_gap = 0.0;
  Index iterations = 0;
  /// diameter(candidates + v) lower-bounded by the caller's scale; the
  /// zero test compares distance against zero_tol * scale.
  double scale = 0.0;
};

/// Thrown when the iteration cap is hit; carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, ProjectionResult best) : Error(what), best_(std::move(best)) {}
  const ProjectionResult& best() const noexcept { return best_; }

 private:
  ProjectionResult best_;
};

/// Projection onto conv{points.row(i) : i in members}.
///
/// `scale` must be at least the diameter of the member set (the dataset
/// diameter is fine); the solver widens it by the distances from v. `warm`,
/// when non-empty, holds previous weights aligned with `members`.
ProjectionResult project_onto_hull(const PointSet& points, std::span<const Index> members,
                                   const Eigen::Ref<const Vector>& v, const SolverConfig& cfg, double scale,
                                   std::span<const double> warm = {});

/// Distance from v to conv(candidates) with an exact scale.
ProjectionResult hull_distance(const Eigen::Ref<const Vector>& v, const PointSet& candidates,
                               const SolverConfig& cfg = {}, std::span<const double> warm = {});

/// True iff hull_distance(v, candidates).distance <= zero_tol * diameter.
bool is_inside(const Eigen::Ref<const Vector>& v, const PointSet& candidates, const SolverConfig& cfg = {});

/// Zero test shared by every caller that interprets a ProjectionResult.
inline bool is_zero_distance(const ProjectionResult& r, const SolverConfig& cfg) {
  return r.distance <= cfg.zero_tol * r.scale;
}

}  // namespace acthull

#pragma once

#include "acthull/projection.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace acthull {

enum class InitMethod { direction_extremes, seminmf };

/// Which points the greedy step ranges over. `outside` is the tracked set of
/// points with nonzero residual; `complement` is every non-vertex point,
/// including covered ones (which can only win exact ties).
enum class SelectionDomain { outside, complement };

struct BuilderConfig {
  /// Approximation tolerance as a fraction of the dataset diameter.
  double epsilon_rel = 0.01;
  InitMethod init = InitMethod::seminmf;
  /// Startup budget; unset means min(n, max(d + 1, ceil(min(32, n / 4)))).
  std::optional<Index> init_count;
  /// Only the `candidate_cap` farthest outside points are scored per step.
  std::optional<Index> candidate_cap;
  std::uint64_t seed = 0;
  Index seminmf_iters = 100;
  SelectionDomain domain = SelectionDomain::outside;
  /// Skip candidates whose certified lower bound cannot beat the incumbent.
  /// Selection is identical either way; only the work differs.
  bool bounded_scoring = true;
  SolverConfig solver;

  void validate() const;
  Index resolved_init_count(Index n, Index d) const;
};

struct HullApprox {
  std::vector<Index> vertex_indices;  // ascending
  double epsilon = 0.0;               // absolute
  double epsilon_rel = 0.0;
  double max_residual = 0.0;
  double diameter = 0.0;
  bool diameter_exact = true;
  Index iterations = 0;
  Index qp_solve_count = 0;
  Index certificate_skips = 0;
  Index init_size = 0;
  Index pruned_vertices = 0;
  double wall_time = 0.0;  // seconds
  std::string algorithm;
  /// max_residual before the first and after every expansion step.
  std::vector<double> residual_trace;
};

/// Raised when a build cannot finish; carries what was built so far.
class BuildError : public Error {
 public:
  BuildError(const std::string& what, HullApprox partial) : Error(what), partial_(std::move(partial)) {}
  const HullApprox& partial() const noexcept { return partial_; }

 private:
  HullApprox partial_;
};

/// Maximizers of k seeded random linear functionals, deduplicated, ascending.
/// Ties go to the lowest index, so every result is a true extreme point.
std::vector<Index> init_direction_extremes(const PointSet& points, Index k, std::uint64_t seed);

struct Selection {
  Index index = 0;
  /// max residual over the outside set after adding `index`.
  double score = 0.0;
};

/// One greedy expansion step: argmin over candidates of the largest
/// remaining residual. Scores within zero_tol * diameter of the minimum tie,
/// and ties go to the lowest index.
Selection expansion_select(const PointSet& points, std::span<const Index> current, std::span<const Index> outside,
                           const BuilderConfig& cfg);

/// Drops members lying in the hull of the others, visiting them in ascending
/// index order against the already-pruned set. Returns ascending indices.
std::vector<Index> prune_vertices(const PointSet& points, std::span<const Index> current, const SolverConfig& cfg,
                                  double scale);

/// Greedy expansion from a startup set, pruning vertices and the outside set
/// after every step.
HullApprox build_revised_ge(const PointSet& points, const BuilderConfig& cfg);

/// Same loop started from the approximate diameter pair.
HullApprox build_ge(const PointSet& points, const BuilderConfig& cfg);

/// The startup selection alone (KCHA-style or direction extremes), timed like
/// a build. max_residual is measured afterwards and may exceed epsilon.
HullApprox build_init_only(const PointSet& points, const BuilderConfig& cfg);

/// Largest distance from any point to conv(vertices), recomputed from
/// scratch. Used to re-verify builds.
double max_hull_residual(const PointSet& points, std::span<const Index> vertices, const SolverConfig& cfg,
                         double scale);

const char* to_string(InitMethod m);
InitMethod init_method_from_string(const std::string& s);

}  // namespace acthull

#pragma once

#include "acthull/mlp.hpp"
#include "acthull/projection.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace acthull {

inline constexpr Index kDefaultPairCap = 2'000'000;
inline constexpr Index kDefaultBins = 50;

struct SolveFailure {
  Index vector_index = 0;
  std::string message;
};

/// Same-class extremity audit for one class of one layer.
struct ExtremeAudit {
  Index layer_index = 0;
  int class_label = 0;
  Index total = 0;
  Index non_extreme = 0;
  std::vector<Index> non_extreme_indices;  // rows of the activation set
  std::vector<SolveFailure> failures;
};

/// Tests every vector of each class (with >= 2 members) against the hull of
/// the rest of its class. Solver failures are recorded, not thrown.
std::vector<ExtremeAudit> audit_all_extreme(const ActivationSet& acts, const SolverConfig& cfg = {});

struct InclusionViolation {
  Index vector_index = 0;
  int own_class = 0;
  int containing_class = 0;
  double distance = 0.0;
};

struct InclusionAudit {
  Index layer_index = 0;
  std::string split;
  Index pairs_tested = 0;
  std::vector<InclusionViolation> violations;
  std::vector<SolveFailure> failures;
};

/// Tests each vector against the hull of every other class. `class_hulls[c]`
/// holds the vertices of class c; empty entries are skipped.
InclusionAudit audit_mis_inclusion(const ActivationSet& acts, std::span<const PointSet> class_hulls,
                                   const SolverConfig& cfg = {});

struct DistanceHistogram {
  Index layer_index = 0;
  int class_label = 0;
  std::vector<double> bin_edges;  // bins + 1, ascending
  std::vector<Index> counts;
  double peak_bin_center = 0.0;  // modal bin, leftmost on ties
  double mean_distance = 0.0;    // over the evaluated pairs
  Index pairs = 0;
  bool sampled = false;
};

/// Same-class pairwise distances binned on [0, max distance]. When the class
/// has more than `pair_cap` unordered pairs, `pair_cap` pairs are drawn
/// uniformly (with replacement) from the seed before any distance is computed.
DistanceHistogram inner_class_histogram(const ActivationSet& acts, int class_label, Index bins = kDefaultBins,
                                        Index pair_cap = kDefaultPairCap, std::uint64_t seed = 0);

/// Mean distance over all unordered pairs of the layer, sampled past
/// `pair_cap`. Used to put histogram peaks of different layers on one scale.
double layer_mean_distance(const ActivationSet& acts, Index pair_cap = kDefaultPairCap, std::uint64_t seed = 0);

struct InterClassMatrix {
  Index layer_index = 0;
  std::vector<int> classes;  // row/column labels, ascending
  Eigen::MatrixXd matrix;    // mean distances; diagonal is the mean inner distance
  /// Entries estimated from a sample rather than every pair.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> sampled;
};

/// Mean distance between every pair of classes present in `acts`.
InterClassMatrix inter_class_matrix(const ActivationSet& acts, Index pair_cap = kDefaultPairCap,
                                    std::uint64_t seed = 0);

struct InnerInterCorrelation {
  std::vector<int> classes;
  std::vector<double> inner;  // diagonal entries
  std::vector<double> inter;  // mean off-diagonal entry per row
  double pearson = 0.0;       // NaN when either side is constant
};

InnerInterCorrelation inner_inter_correlation(const InterClassMatrix& m);

struct RadiusStats {
  int class_label = 0;
  Index count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

/// Per-class distribution of distances to the centroid of all vectors.
std::vector<RadiusStats> class_radius_stats(const ActivationSet& acts);

}  // namespace acthull

#pragma once

#include "acthull/point_set.hpp"

#include <cstdint>
#include <vector>

namespace acthull {

/// Factors of the Semi-NMF X ~ F G' of the centered data (points as columns
/// of X): F unconstrained, G nonnegative.
struct SemiNmfFactors {
  Eigen::MatrixXd centroids;  // d x k, F = X G (G'G)^-1
  Eigen::MatrixXd loadings;   // n x k, G >= 0
  double relative_error = 0.0;  // |X - F G'|_F / |X|_F
};

/// Semi-NMF by multiplicative updates. The data enter only through the
/// linear kernel K = X'X, applied in factored form so an iteration costs
/// O(n d k + n k^2). Deterministic per seed.
SemiNmfFactors semi_nmf(const PointSet& points, Index k, Index iters, std::uint64_t seed);

/// KCHA-style startup set: for each factor, the point with the largest
/// loading; deduplicated and ascending. May contain interior points.
std::vector<Index> init_seminmf(const PointSet& points, Index k, Index iters, std::uint64_t seed);

}  // namespace acthull

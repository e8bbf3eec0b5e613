#include "acthull/geometry.hpp"

#include "acthull/errors.hpp"

#include <algorithm>
#include <numeric>

namespace acthull {

double pairwise_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) {
    throw InputError("pairwise_distance: dimension mismatch " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  return (a - b).norm();
}

namespace {

Index farthest_from(const PointSet& points, Index from, double& dist) {
  const auto& m = points.matrix();
  Eigen::Index best = 0;
  dist = std::sqrt((m.rowwise() - m.row(static_cast<Eigen::Index>(from))).rowwise().squaredNorm().maxCoeff(&best));
  return static_cast<Index>(best);
}

}  // namespace

Diameter diameter(const PointSet& points) {
  const Index n = points.size();
  if (n < 2) return {0.0, true};
  const auto& m = points.matrix();
  if (n <= kExactDiameterLimit) {
    double best = 0.0;
    for (Index i = 0; i + 1 < n; ++i) {
      const auto rest = m.bottomRows(static_cast<Eigen::Index>(n - i - 1));
      best = std::max(best, (rest.rowwise() - m.row(static_cast<Eigen::Index>(i))).rowwise().squaredNorm().maxCoeff());
    }
    return {std::sqrt(best), true};
  }
  double dist = 0.0;
  const Index a = farthest_from(points, 0, dist);
  farthest_from(points, a, dist);
  return {dist, false};
}

std::vector<Index> exact_extremes_2d(const PointSet& points) {
  if (points.dim() != 2) {
    throw InputError("exact_extremes_2d requires d == 2, got d == " + std::to_string(points.dim()));
  }
  const Index n = points.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  auto x = [&](Index i) { return points.row(i)[0]; };
  auto y = [&](Index i) { return points.row(i)[1]; };
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (x(a) != x(b)) return x(a) < x(b);
    if (y(a) != y(b)) return y(a) < y(b);
    return a < b;
  });
  order.erase(std::unique(order.begin(), order.end(), [&](Index a, Index b) { return x(a) == x(b) && y(a) == y(b); }),
              order.end());
  if (order.size() <= 2) {
    std::sort(order.begin(), order.end());
    return order;
  }

  auto cross = [&](Index o, Index a, Index b) {
    return (x(a) - x(o)) * (y(b) - y(o)) - (y(a) - y(o)) * (x(b) - x(o));
  };
  // Andrew's monotone chain; popping on cross <= 0 drops collinear points.
  std::vector<Index> hull(2 * order.size());
  std::size_t k = 0;
  for (Index i : order) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
    hull[k++] = i;
  }
  for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
    const Index i = order[t];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  std::sort(hull.begin(), hull.end());
  hull.erase(std::unique(hull.begin(), hull.end()), hull.end());
  return hull;
}

}  // namespace acthull

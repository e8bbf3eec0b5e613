#include "acthull/seminmf.hpp"

#include "acthull/errors.hpp"
#include "acthull/rng.hpp"

#include <algorithm>

namespace acthull {

namespace {

Eigen::MatrixXd positive_part(const Eigen::MatrixXd& m) { return (m.array().abs() + m.array()) * 0.5; }
Eigen::MatrixXd negative_part(const Eigen::MatrixXd& m) { return (m.array().abs() - m.array()) * 0.5; }

// (G'G)^-1 with a small ridge so collapsed factors stay invertible.
Eigen::MatrixXd gram_inverse(const Eigen::MatrixXd& g) {
  Eigen::MatrixXd gtg = g.transpose() * g;
  const double ridge = 1e-10 * std::max(1.0, gtg.trace() / static_cast<double>(gtg.rows()));
  gtg.diagonal().array() += ridge;
  return gtg.ldlt().solve(Eigen::MatrixXd::Identity(gtg.rows(), gtg.cols()));
}

}  // namespace

SemiNmfFactors semi_nmf(const PointSet& points, Index k, Index iters, std::uint64_t seed) {
  if (k < 1) throw InputError("semi-NMF needs k >= 1");
  if (iters < 1) throw InputError("semi-NMF needs iters >= 1");
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto kk = static_cast<Eigen::Index>(std::min<Index>(k, points.size()));

  // Rows are points, so X = centered' and K = centered * centered'.
  const RowMatrix centered = points.matrix().rowwise() - points.matrix().colwise().mean();

  Rng rng(seed);
  Eigen::MatrixXd g(n, kk);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < kk; ++j) g(i, j) = rng.uniform(0.05, 1.0);
  }

  constexpr double kGuard = 1e-12;
  Eigen::MatrixXd f;
  for (Index it = 0; it < iters; ++it) {
    f = centered.transpose() * g * gram_inverse(g);  // d x k
    const Eigen::MatrixXd xf = centered * f;         // n x k, X'F = K G (G'G)^-1
    const Eigen::MatrixXd ff = f.transpose() * f;    // k x k
    const Eigen::MatrixXd numer = positive_part(xf) + g * negative_part(ff);
    const Eigen::MatrixXd denom = negative_part(xf) + g * positive_part(ff);
    g.array() *= (numer.array() / denom.array().max(kGuard)).sqrt();
    if (!g.allFinite()) {
      throw NumericalError("semi-NMF diverged (non-finite loadings) at iteration " + std::to_string(it));
    }
  }
  f = centered.transpose() * g * gram_inverse(g);

  SemiNmfFactors out;
  const double base = centered.norm();
  out.relative_error = base > 0.0 ? (centered.transpose() - f * g.transpose()).norm() / base : 0.0;
  out.centroids = std::move(f);
  out.loadings = std::move(g);
  return out;
}

std::vector<Index> init_seminmf(const PointSet& points, Index k, Index iters, std::uint64_t seed) {
  const SemiNmfFactors factors = semi_nmf(points, k, iters, seed);
  std::vector<Index> picked;
  picked.reserve(static_cast<Index>(factors.loadings.cols()));
  for (Eigen::Index j = 0; j < factors.loadings.cols(); ++j) {
    Eigen::Index best = 0;
    factors.loadings.col(j).maxCoeff(&best);
    picked.push_back(static_cast<Index>(best));
  }
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  return picked;
}

}  // namespace acthull

#pragma once

#include "acthull/dataset.hpp"
#include "acthull/rng.hpp"

#include <vector>

namespace testing_support {

using acthull::Index;

inline acthull::PointSet pts(const std::vector<std::vector<double>>& rows) {
  return acthull::PointSet::from_rows(rows);
}

inline acthull::Vector vec(std::initializer_list<double> v) {
  acthull::Vector out(static_cast<Eigen::Index>(v.size()));
  Index i = 0;
  for (double x : v) out(static_cast<Eigen::Index>(i++)) = x;
  return out;
}

inline acthull::PointSet gaussian(Index n, Index d, std::uint64_t seed, double scale = 1.0) {
  acthull::Rng rng(seed);
  acthull::RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = scale * rng.normal();
  }
  return acthull::PointSet(std::move(m));
}

/// Two labeled N(center, I) blobs in `d` dimensions, centers `sep` apart
/// along the first axis.
inline acthull::LabeledVectors blobs(Index per_class, Index d, double sep, std::uint64_t seed) {
  acthull::Rng rng(seed);
  acthull::RowMatrix m(static_cast<Eigen::Index>(2 * per_class), static_cast<Eigen::Index>(d));
  acthull::LabeledVectors out;
  for (Index i = 0; i < 2 * per_class; ++i) {
    const int label = static_cast<int>(i % 2);
    for (Index j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal();
    m(static_cast<Eigen::Index>(i), 0) += label * sep;
    out.labels.push_back(label);
  }
  out.vectors = acthull::PointSet(std::move(m));
  return out;
}

/// Random orthogonal matrix via QR of a Gaussian matrix.
inline Eigen::MatrixXd random_rotation(Index d, std::uint64_t seed) {
  acthull::Rng rng(seed);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ();
}

inline acthull::PointSet transform(const acthull::PointSet& p, const Eigen::MatrixXd& q, const acthull::Vector& t) {
  acthull::RowMatrix m = p.matrix() * q.transpose();
  m.rowwise() += t.transpose();
  return acthull::PointSet(std::move(m));
}

}  // namespace testing_support

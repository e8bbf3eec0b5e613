#include "acthull/point_set.hpp"

#include "acthull/errors.hpp"

#include <string>

namespace acthull {

PointSet::PointSet(RowMatrix points) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw InputError("PointSet requires n >= 1 and d >= 1, got " + std::to_string(points.rows()) + "x" +
                     std::to_string(points.cols()));
  }
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (!std::isfinite(points(i, j))) {
        throw InputError("PointSet entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
      }
    }
  }
  n_ = static_cast<Index>(points.rows());
  d_ = static_cast<Index>(points.cols());
  data_ = std::make_shared<const RowMatrix>(std::move(points));
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("PointSet requires at least one row");
  const std::size_t d = rows.front().size();
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw InputError("ragged rows: row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return PointSet(std::move(m));
}

PointSet PointSet::subset(std::span<const Index> indices) const {
  RowMatrix m(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(d_));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= n_) throw InputError("subset index " + std::to_string(indices[k]) + " out of range");
    m.row(static_cast<Eigen::Index>(k)) = data_->row(static_cast<Eigen::Index>(indices[k]));
  }
  return PointSet(std::move(m));
}

PointSet PointSet::without(Index skip) const {
  std::vector<Index> keep;
  keep.reserve(n_);
  for (Index i = 0; i < n_; ++i) {
    if (i != skip) keep.push_back(i);
  }
  return subset(keep);
}

void require_finite(const Eigen::Ref<const Vector>& v, const char* what) {
  if (!v.allFinite()) throw InputError(std::string(what) + " has non-finite entries");
}

}  // namespace acthull

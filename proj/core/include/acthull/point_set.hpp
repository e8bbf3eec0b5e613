#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace acthull {

using Index = std::size_t;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstVecMap = Eigen::Map<const Vector>;

/// Immutable n x d matrix of finite reals; one point per row.
///
/// Copies share storage. A default-constructed PointSet is empty and only
/// useful as a placeholder; every other constructor enforces n >= 1, d >= 1
/// and finiteness.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(RowMatrix points);

  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  Index size() const noexcept { return n_; }
  Index dim() const noexcept { return d_; }
  bool empty() const noexcept { return n_ == 0; }

  ConstVecMap row(Index i) const { return ConstVecMap(data_->data() + i * d_, static_cast<Eigen::Index>(d_)); }
  const RowMatrix& matrix() const { return *data_; }

  /// Rows at `indices`, in the given order.
  PointSet subset(std::span<const Index> indices) const;
  /// All rows except `skip`.
  PointSet without(Index skip) const;

 private:
  std::shared_ptr<const RowMatrix> data_;
  Index n_ = 0;
  Index d_ = 0;
};

/// Throws InputError unless every entry of `v` is finite.
void require_finite(const Eigen::Ref<const Vector>& v, const char* what);

}  // namespace acthull

#include "acthull/projection.hpp"

#include "acthull/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace acthull {

void SolverConfig::validate() const {
  if (!(gap_tol > 0.0 && gap_tol < 1.0)) throw InputError("SolverConfig.gap_tol must lie in (0, 1)");
  if (!(zero_tol > 0.0)) throw InputError("SolverConfig.zero_tol must be positive");
  if (max_iters && *max_iters == 0) throw InputError("SolverConfig.max_iters must be positive");
}

bool SimplexWeights::feasible(double tol) const {
  return alpha.size() > 0 && alpha.minCoeff() >= 0.0 && std::abs(alpha.sum() - 1.0) <= tol;
}

namespace {

// Lower-triangular factor of M = c^2 * 11' + Y'Y over the corral, kept in
// sync with the corral order under append and delete.
class IncrementalCholesky {
 public:
  explicit IncrementalCholesky(Index capacity) : cap_(capacity), l_(capacity * capacity, 0.0) {}

  Index size() const { return n_; }

  // `cross` holds M(new, k) for existing k; `diag` is M(new, new).
  bool append(const std::vector<double>& cross, double diag) {
    if (n_ == cap_) grow();
    double rest = diag;
    for (Index i = 0; i < n_; ++i) {
      double z = cross[i];
      for (Index k = 0; k < i; ++k) z -= at(i, k) * at(n_, k);
      z /= at(i, i);
      at(n_, i) = z;
      rest -= z * z;
    }
    // New column nearly in the span of the corral: affinely dependent.
    if (!(rest > 1e-12 * diag)) return false;
    at(n_, n_) = std::sqrt(rest);
    ++n_;
    return true;
  }

  void remove(Index k) {
    for (Index i = k; i + 1 < n_; ++i) {
      for (Index j = 0; j <= i + 1; ++j) at(i, j) = at(i + 1, j);
    }
    --n_;
    // Rows k.. now carry one superdiagonal entry; rotate it away.
    for (Index r = k; r < n_; ++r) {
      const double a = at(r, r);
      const double b = at(r, r + 1);
      const double h = std::hypot(a, b);
      const double c = a / h;
      const double s = b / h;
      for (Index i = r; i < n_; ++i) {
        const double p = at(i, r);
        const double q = at(i, r + 1);
        at(i, r) = c * p + s * q;
        at(i, r + 1) = -s * p + c * q;
      }
      at(r, r + 1) = 0.0;
    }
    for (Index i = 0; i < n_; ++i) at(i, n_) = 0.0;
  }

  // Solves M u = 1.
  void solve_ones(std::vector<double>& u) const {
    u.assign(n_, 1.0);
    for (Index i = 0; i < n_; ++i) {
      double s = u[i];
      for (Index k = 0; k < i; ++k) s -= at(i, k) * u[k];
      u[i] = s / at(i, i);
    }
    for (Index i = n_; i-- > 0;) {
      double s = u[i];
      for (Index k = i + 1; k < n_; ++k) s -= at(k, i) * u[k];
      u[i] = s / at(i, i);
    }
  }

 private:
  double& at(Index i, Index j) { return l_[i * cap_ + j]; }
  double at(Index i, Index j) const { return l_[i * cap_ + j]; }

  void grow() {
    const Index next = cap_ * 2 + 1;
    std::vector<double> bigger(next * next, 0.0);
    for (Index i = 0; i < n_; ++i) {
      for (Index j = 0; j <= i; ++j) bigger[i * next + j] = at(i, j);
    }
    l_.swap(bigger);
    cap_ = next;
  }

  Index cap_;
  Index n_ = 0;
  std::vector<double> l_;
};

// Wolfe's minimum-norm-point iteration on y_i = x_i - v.
class MinNormSolver {
 public:
  MinNormSolver(const PointSet& points, std::span<const Index> members, const Eigen::Ref<const Vector>& v,
                const SolverConfig& cfg, double scale)
      : points_(points),
        members_(members),
        v_(v),
        cfg_(cfg),
        m_(members.size()),
        d_(points.dim()),
        chol_(std::min(m_, d_ + 1) + 1),
        in_corral_(m_, 0),
        grad_(m_) {
    double max_sq = 0.0;
    double min_sq = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m_; ++i) {
      const double sq = (points_.row(members_[i]) - v_).squaredNorm();
      max_sq = std::max(max_sq, sq);
      if (sq < min_sq) {
        min_sq = sq;
        closest_ = i;
      }
    }
    scale_ = std::max(scale, std::sqrt(max_sq));
    offset_ = max_sq > 0.0 ? max_sq : 1.0;
    // Below |r|^2 = zero_tol * scale^2 the gap is measured against this
    // floor instead of the vanishing objective.
    floor_ = cfg_.zero_tol * scale_ * scale_;
    ys_.resize(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(std::min(m_, d_ + 1) + 1));
  }

  ProjectionResult solve(std::span<const double> warm) {
    if (!warm.empty() && warm.size() == m_) start_warm(warm);
    if (corral_.empty()) start_cold();

    const Index cap = cfg_.iteration_cap(m_);
    Vector x(static_cast<Eigen::Index>(d_));
    while (true) {
      current_point(x);
      const double xx = x.squaredNorm();
      const double vx = v_.dot(x);
      double gmin = std::numeric_limits<double>::infinity();
      double gout = std::numeric_limits<double>::infinity();
      Index enter = m_;
      for (Index i = 0; i < m_; ++i) {
        const double g = points_.row(members_[i]).dot(x) - vx;
        grad_[i] = g;
        gmin = std::min(gmin, g);
        if (!in_corral_[i] && g < gout) {
          gout = g;
          enter = i;
        }
      }
      const double gap = std::max(0.0, xx - gmin);
      abs_gap_ = gap;
      rel_gap_ = floor_ > 0.0 ? gap / std::max(xx, floor_) : 0.0;
      if (rel_gap_ <= cfg_.gap_tol) break;
      if (enter == m_ || !(gout < xx)) break;  // stalled at round-off
      if (++iterations_ > cap) {
        throw ConvergenceError("hull distance QP did not reach gap " + std::to_string(cfg_.gap_tol) + " within " +
                                   std::to_string(cap) + " iterations",
                               result());
      }
      if (!add(enter)) break;
      lambda_.push_back(0.0);
      minor_cycle(cap);
    }
    return result();
  }

 private:
  void start_cold() {
    add(closest_);
    lambda_.assign(1, 1.0);
  }

  void start_warm(std::span<const double> warm) {
    std::vector<Index> support;
    for (Index i = 0; i < m_; ++i) {
      if (warm[i] > 1e-12) support.push_back(i);
    }
    std::stable_sort(support.begin(), support.end(), [&](Index a, Index b) { return warm[a] > warm[b]; });
    double total = 0.0;
    for (Index i : support) {
      if (add(i)) {
        lambda_.push_back(warm[i]);
        total += warm[i];
      }
    }
    if (corral_.empty()) return;
    for (double& l : lambda_) l /= total;
    minor_cycle(cfg_.iteration_cap(m_));
  }

  bool add(Index i) {
    const auto col = static_cast<Eigen::Index>(corral_.size());
    if (col == ys_.cols()) ys_.conservativeResize(Eigen::NoChange, 2 * ys_.cols() + 1);
    ys_.col(col) = points_.row(members_[i]) - v_;
    cross_.resize(corral_.size());
    for (Index k = 0; k < corral_.size(); ++k) {
      cross_[k] = offset_ + ys_.col(static_cast<Eigen::Index>(k)).dot(ys_.col(col));
    }
    if (!chol_.append(cross_, offset_ + ys_.col(col).squaredNorm())) return false;
    corral_.push_back(i);
    in_corral_[i] = 1;
    return true;
  }

  void drop(Index slot) {
    in_corral_[corral_[slot]] = 0;
    chol_.remove(slot);
    const auto s = static_cast<Eigen::Index>(corral_.size());
    for (Eigen::Index c = static_cast<Eigen::Index>(slot); c + 1 < s; ++c) ys_.col(c) = ys_.col(c + 1);
    corral_.erase(corral_.begin() + static_cast<std::ptrdiff_t>(slot));
    lambda_.erase(lambda_.begin() + static_cast<std::ptrdiff_t>(slot));
  }

  // Moves lambda toward the affine minimizer of the corral, dropping points
  // whose weight reaches zero on the way.
  void minor_cycle(Index cap) {
    constexpr double kTiny = 1e-14;
    while (true) {
      chol_.solve_ones(mu_);
      double total = 0.0;
      for (double u : mu_) total += u;
      for (double& u : mu_) u /= total;
      const bool interior = std::all_of(mu_.begin(), mu_.end(), [](double u) { return u > kTiny; });
      if (interior) {
        lambda_ = mu_;
        return;
      }
      double theta = 1.0;
      for (Index k = 0; k < mu_.size(); ++k) {
        if (mu_[k] <= kTiny) theta = std::min(theta, lambda_[k] / (lambda_[k] - mu_[k]));
      }
      Index weakest = 0;
      for (Index k = 0; k < mu_.size(); ++k) {
        lambda_[k] += theta * (mu_[k] - lambda_[k]);
        if (lambda_[k] < lambda_[weakest]) weakest = k;
      }
      lambda_[weakest] = 0.0;
      for (Index k = lambda_.size(); k-- > 0;) {
        if (lambda_[k] <= kTiny) drop(k);
      }
      double sum = 0.0;
      for (double l : lambda_) sum += l;
      for (double& l : lambda_) l /= sum;
      if (++iterations_ > cap) {
        throw ConvergenceError("hull distance QP minor cycle exceeded " + std::to_string(cap) + " iterations",
                               result());
      }
    }
  }

  void current_point(Vector& x) const {
    x.setZero();
    for (Index k = 0; k < corral_.size(); ++k) x.noalias() += lambda_[k] * ys_.col(static_cast<Eigen::Index>(k));
  }

  ProjectionResult result() const {
    ProjectionResult r;
    r.weights.alpha = Vector::Zero(static_cast<Eigen::Index>(m_));
    r.nearest_point = Vector::Zero(static_cast<Eigen::Index>(d_));
    for (Index k = 0; k < corral_.size(); ++k) {
      r.weights.alpha[static_cast<Eigen::Index>(corral_[k])] = lambda_[k];
      r.nearest_point.noalias() += lambda_[k] * points_.row(members_[corral_[k]]);
    }
    r.distance = (v_ - r.nearest_point).norm();
    r.solver_gap = rel_gap_;
    r.absolute_gap = abs_gap_;
    r.iterations = iterations_;
    r.scale = scale_;
    return r;
  }

  const PointSet& points_;
  std::span<const Index> members_;
  const Eigen::Ref<const Vector>& v_;
  const SolverConfig& cfg_;
  Index m_;
  Index d_;
  IncrementalCholesky chol_;
  std::vector<char> in_corral_;
  std::vector<Index> corral_;
  std::vector<double> lambda_;
  std::vector<double> mu_;
  std::vector<double> cross_;
  std::vector<double> grad_;
  Eigen::MatrixXd ys_;
  Index closest_ = 0;
  Index iterations_ = 0;
  double scale_ = 0.0;
  double offset_ = 1.0;
  double floor_ = 0.0;
  double rel_gap_ = 0.0;
  double abs_gap_ = 0.0;
};

}  // namespace

ProjectionResult project_onto_hull(const PointSet& points, std::span<const Index> members,
                                   const Eigen::Ref<const Vector>& v, const SolverConfig& cfg, double scale,
                                   std::span<const double> warm) {
  cfg.validate();
  if (members.empty()) throw InputError("hull distance needs at least one candidate");
  if (static_cast<Index>(v.size()) != points.dim()) {
    throw InputError("hull distance: query has dimension " + std::to_string(v.size()) + ", candidates have " +
                     std::to_string(points.dim()));
  }
  require_finite(v, "hull distance query");
  for (Index i : members) {
    if (i >= points.size()) throw InputError("hull distance: member index out of range");
  }
  if (!warm.empty() && warm.size() != members.size()) {
    throw InputError("hull distance: warm start has " + std::to_string(warm.size()) + " weights for " +
                     std::to_string(members.size()) + " candidates");
  }
  MinNormSolver solver(points, members, v, cfg, scale);
  return solver.solve(warm);
}

ProjectionResult hull_distance(const Eigen::Ref<const Vector>& v, const PointSet& candidates,
                               const SolverConfig& cfg, std::span<const double> warm) {
  if (candidates.empty()) throw InputError("hull distance needs at least one candidate");
  std::vector<Index> all(candidates.size());
  for (Index i = 0; i < all.size(); ++i) all[i] = i;
  return project_onto_hull(candidates, all, v, cfg, diameter(candidates).value, warm);
}

bool is_inside(const Eigen::Ref<const Vector>& v, const PointSet& candidates, const SolverConfig& cfg) {
  return is_zero_distance(hull_distance(v, candidates, cfg), cfg);
}

}  // namespace acthull

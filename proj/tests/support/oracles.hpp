#pragma once

// Reference implementations used only by tests. Each is deliberately naive
// and shares no code with the library routine it checks.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Pts = std::vector<Eigen::VectorXd>;

/// Grid minimum of |v - sum a_i x_i| with every a_i a multiple of `step`.
///
/// By Caratheodory the minimum over the simplex is attained on a face
/// spanned by at most d + 1 points, so the grid is laid over every such
/// face. On each face the first coordinates are enumerated and the last
/// pair is minimized exactly over its lattice line (a convex quadratic in one
/// integer variable is minimized at a neighbor of its real minimizer).
inline double grid_distance(const Pts& x_in, const Eigen::VectorXd& v_in, double step) {
  // Inputs are padded to 3D; zero coordinates leave every distance unchanged.
  using V3 = Eigen::Vector3d;
  const int m = static_cast<int>(x_in.size());
  const int d = static_cast<int>(v_in.size());
  if (d > 3) throw std::invalid_argument("grid oracle handles d <= 3");
  auto pad = [&](const Eigen::VectorXd& a) {
    V3 out = V3::Zero();
    out.head(d) = a;
    return out;
  };
  std::vector<V3> x;
  for (const auto& p : x_in) x.push_back(pad(p));
  const V3 v = pad(v_in);
  const int steps = static_cast<int>(std::lround(1.0 / step));
  const int max_face = std::min(m, d + 1);
  double best = std::numeric_limits<double>::infinity();

  auto line_min = [&](const V3& w, int rest, const V3& p, const V3& q) {
    // f(a) = |w - (a p + (rest - a) q) / steps|^2 for integer a in [0, rest]
    const V3 base = w - (static_cast<double>(rest) / steps) * q;
    const V3 dir = (p - q) / steps;
    const double dd = dir.squaredNorm();
    double a_star = dd > 0 ? base.dot(dir) / dd : 0.0;
    a_star = std::clamp(a_star, 0.0, static_cast<double>(rest));
    double out = std::numeric_limits<double>::infinity();
    for (double a : {std::floor(a_star), std::ceil(a_star)}) out = std::min(out, (base - a * dir).squaredNorm());
    return out;
  };

  std::vector<int> face;
  std::function<void(int)> choose = [&](int next) {
    if (!face.empty()) {
      const int s = static_cast<int>(face.size());
      if (s == 1) {
        best = std::min(best, (v - x[face[0]]).squaredNorm());
      } else {
        // enumerate grid weights of face[0..s-3], the last two by line_min
        std::function<void(int, int, const V3&)> rec = [&](int i, int left, const V3& w) {
          if (i == s - 2) {
            best = std::min(best, line_min(w, left, x[face[s - 2]], x[face[s - 1]]));
            return;
          }
          for (int a = 0; a <= left; ++a) rec(i + 1, left - a, w - (static_cast<double>(a) / steps) * x[face[i]]);
        };
        rec(0, steps, v);
      }
    }
    if (static_cast<int>(face.size()) == max_face) return;
    for (int j = next; j < m; ++j) {
      face.push_back(j);
      choose(j + 1);
      face.pop_back();
    }
  };
  choose(0);
  return std::sqrt(best);
}

/// Cross product sign test: is p strictly a vertex of the 2D hull of pts?
/// O(n^3): p is extreme iff some line through p has all other points
/// strictly on one side, or p is the unique farthest point in some
/// direction. Checked over the normals of every segment from p.
inline std::vector<std::size_t> extremes_2d_bruteforce(const std::vector<std::array<double, 2>>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    bool dup_lower = false;
    for (std::size_t j = 0; j < i; ++j) dup_lower |= pts[j] == pts[i];
    if (dup_lower) continue;
    // p is not extreme iff it lies in a triangle (closed) of three other
    // points or on a segment between two others.
    bool inside = false;
    auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
      return (pts[b][0] - pts[a][0]) * (pts[c][1] - pts[a][1]) - (pts[b][1] - pts[a][1]) * (pts[c][0] - pts[a][0]);
    };
    for (std::size_t a = 0; a < n && !inside; ++a) {
      if (a == i || pts[a] == pts[i]) continue;
      for (std::size_t b = a + 1; b < n && !inside; ++b) {
        if (b == i || pts[b] == pts[i]) continue;
        // on segment ab
        if (cross(a, b, i) == 0.0) {
          const double t0 = (pts[i][0] - pts[a][0]) * (pts[b][0] - pts[a][0]) +
                            (pts[i][1] - pts[a][1]) * (pts[b][1] - pts[a][1]);
          const double len = (pts[b][0] - pts[a][0]) * (pts[b][0] - pts[a][0]) +
                             (pts[b][1] - pts[a][1]) * (pts[b][1] - pts[a][1]);
          if (t0 > 0.0 && t0 < len) inside = true;
        }
        for (std::size_t c = b + 1; c < n && !inside; ++c) {
          if (c == i || pts[c] == pts[i]) continue;
          const double d1 = cross(a, b, i), d2 = cross(b, c, i), d3 = cross(c, a, i);
          const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
          const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
          if (!(neg && pos) && cross(a, b, c) != 0.0) inside = true;
        }
      }
    }
    if (!inside) out.push_back(i);
  }
  return out;
}

/// Indices of the k nearest rows by full sort on (squared distance, index).
inline std::vector<std::size_t> knn_sorted(const std::vector<Eigen::VectorXd>& train, const Eigen::VectorXd& q,
                                           std::size_t k, std::size_t exclude) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t j = 0; j < train.size(); ++j) {
    if (j != exclude) all.emplace_back((train[j] - q).squaredNorm(), j);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(all[j].second);
  return out;
}

/// Monte-Carlo estimate of E|x - y| for x ~ N(mu1, I2), y ~ N(mu2, I2).
inline double mc_blob_distance(double separation, std::size_t samples, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double dx = separation + z(gen) - z(gen);
    const double dy = z(gen) - z(gen);
    total += std::sqrt(dx * dx + dy * dy);
  }
  return total / static_cast<double>(samples);
}

}  // namespace oracle

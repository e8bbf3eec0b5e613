#include "acthull/hull_builder.hpp"

#include "acthull/geometry.hpp"
#include "acthull/rng.hpp"
#include "acthull/seminmf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace acthull {

void BuilderConfig::validate() const {
  if (!(epsilon_rel >= 0.0) || !std::isfinite(epsilon_rel)) throw InputError("epsilon_rel must be >= 0");
  if (init_count && *init_count < 1) throw InputError("init_count must be >= 1");
  if (candidate_cap && *candidate_cap < 1) throw InputError("candidate_cap must be >= 1");
  if (seminmf_iters < 1) throw InputError("seminmf_iters must be >= 1");
  solver.validate();
}

Index BuilderConfig::resolved_init_count(Index n, Index d) const {
  if (init_count) return std::min(*init_count, n);
  const auto quarter = static_cast<Index>(std::ceil(std::min(32.0, static_cast<double>(n) / 4.0)));
  return std::min(n, std::max(d + 1, quarter));
}

const char* to_string(InitMethod m) {
  return m == InitMethod::seminmf ? "seminmf" : "directions";
}

InitMethod init_method_from_string(const std::string& s) {
  if (s == "seminmf") return InitMethod::seminmf;
  if (s == "directions" || s == "direction_extremes") return InitMethod::direction_extremes;
  throw InputError("unknown init method '" + s + "' (expected directions|seminmf)");
}

std::vector<Index> init_direction_extremes(const PointSet& points, Index k, std::uint64_t seed) {
  if (k < 1) throw InputError("init_direction_extremes needs k >= 1");
  Rng rng(seed);
  const auto d = static_cast<Eigen::Index>(points.dim());
  Eigen::MatrixXd dirs(d, static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
    for (Eigen::Index i = 0; i < d; ++i) dirs(i, j) = rng.normal();
    const double norm = dirs.col(j).norm();
    if (norm > 0.0) dirs.col(j) /= norm;
  }
  const Eigen::MatrixXd scores = points.matrix() * dirs;
  std::vector<Index> picked;
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < scores.rows(); ++i) {
      if (scores(i, j) > scores(best, j)) best = i;
    }
    picked.push_back(static_cast<Index>(best));
  }
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  return picked;
}

namespace {

using Clock = std::chrono::steady_clock;

// Supporting half-space <normal, y> <= level - margin that holds for every
// vertex other than the point it was derived for.
struct Certificate {
  Vector normal;
  double level = 0.0;
  double margin = -1.0;

  bool valid() const { return margin > 0.0; }
};

struct Residual {
  double distance = 0.0;
  Certificate cert;
  std::vector<std::pair<Index, double>> support;
};

class GreedyBuilder {
 public:
  GreedyBuilder(const PointSet& points, const BuilderConfig& cfg, std::string algorithm)
      : pts_(points),
        cfg_(cfg),
        n_(points.size()),
        pos_(points.size(), kNone),
        vertex_cert_(points.size()),
        residual_(points.size()),
        weight_scratch_(points.size(), 0.0) {
    cfg_.validate();
    const Diameter dia = diameter(points);
    diam_ = dia.value;
    zero_thr_ = cfg_.solver.zero_tol * diam_;
    out_.algorithm = std::move(algorithm);
    out_.diameter = diam_;
    out_.diameter_exact = dia.exact;
    out_.epsilon_rel = cfg_.epsilon_rel;
    out_.epsilon = cfg_.epsilon_rel * diam_;
  }

  HullApprox run(std::vector<Index> start, Clock::time_point t0) {
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    out_.init_size = start.size();
    for (Index v : start) insert_vertex(v);
    prune_pass();
    for (Index v = 0; v < n_; ++v) {
      if (pos_[v] == kNone) residual_[v] = solve_residual(v, vertices_, {});
    }
    rebuild_outside();
    out_.residual_trace.push_back(current_max());

    while (current_max() > out_.epsilon) {
      if (out_.iterations >= n_) fail("expansion did not converge within n iterations", t0);
      std::vector<std::pair<Index, Residual>> cached;
      const Selection sel = select(&cached);
      expand(sel.index, cached, t0);
      ++out_.iterations;
      out_.residual_trace.push_back(current_max());
    }
    return finish(t0);
  }

  // State for the standalone single-step API.
  void load(std::span<const Index> current, std::span<const Index> outside) {
    for (Index v : current) {
      if (v >= n_) throw InputError("vertex index out of range");
      if (pos_[v] == kNone) insert_vertex(v);
    }
    for (Index v : outside) {
      if (v >= n_) throw InputError("outside index out of range");
      if (pos_[v] != kNone) continue;
      residual_[v] = solve_residual(v, vertices_, {});
      outside_.push_back(v);
    }
    std::sort(outside_.begin(), outside_.end());
    outside_.erase(std::unique(outside_.begin(), outside_.end()), outside_.end());
  }

  Selection select(std::vector<std::pair<Index, Residual>>* winner_evals) {
    if (outside_.empty()) throw InputError("expansion_select needs a nonempty outside set");
    const std::vector<Index> candidates = candidate_pool();
    std::vector<Index> targets = outside_;
    std::stable_sort(targets.begin(), targets.end(),
                     [&](Index a, Index b) { return residual_[a].distance > residual_[b].distance; });

    const bool bounded = cfg_.bounded_scoring;
    const auto nt = static_cast<Eigen::Index>(targets.size());
    const auto nc = static_cast<Eigen::Index>(candidates.size());
    const auto d = static_cast<Eigen::Index>(pts_.dim());

    // heights(v, c) = level_v - <normal_v, x_c>: how far candidate c sits
    // below the supporting plane separating target v from the hull.
    Eigen::MatrixXd heights;
    std::vector<double> lower(candidates.size(), 0.0);
    if (bounded) {
      RowMatrix normals(nt, d);
      Eigen::VectorXd levels(nt);
      for (Eigen::Index r = 0; r < nt; ++r) {
        const Residual& res = residual_[targets[static_cast<Index>(r)]];
        normals.row(r) = res.cert.normal.transpose();
        levels[r] = res.cert.level;
      }
      RowMatrix cand(nc, d);
      for (Eigen::Index c = 0; c < nc; ++c) cand.row(c) = pts_.row(candidates[static_cast<Index>(c)]).transpose();
      heights = (-(normals * cand.transpose())).colwise() + levels;
      for (Eigen::Index c = 0; c < nc; ++c) {
        double lb = 0.0;
        for (Eigen::Index r = 0; r < nt; ++r) {
          const Index v = targets[static_cast<Index>(r)];
          if (v == candidates[static_cast<Index>(c)]) continue;
          const Residual& res = residual_[v];
          lb = std::max(lb, std::min(res.cert.margin, heights(r, c)));
        }
        lower[static_cast<Index>(c)] = lb;
      }
    }

    std::vector<Index> order(candidates.size());
    std::iota(order.begin(), order.end(), Index{0});
    if (bounded) {
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return lower[a] < lower[b]; });
    }

    // Scores within zero_thr_ of the minimum are ties and go to the lowest
    // index. Solver noise sits well below that threshold, so the winner does
    // not depend on warm starts or on which targets were certified.
    const double tie = zero_thr_;
    double best = std::numeric_limits<double>::infinity();
    auto out_of_reach = [&](double value) { return value > best + tie; };

    struct Scored {
      Index candidate;
      double score;
      std::vector<std::pair<Index, Residual>> evals;
    };
    std::vector<Scored> contenders;

    std::vector<Index> members(vertices_);
    members.push_back(0);
    std::vector<std::pair<Index, Residual>> evals;
    for (Index slot : order) {
      const Index c = candidates[slot];
      if (bounded && out_of_reach(lower[slot])) break;
      members.back() = c;
      evals.clear();
      double worst = 0.0;
      bool aborted = false;
      for (Index r = 0; r < targets.size(); ++r) {
        const Index v = targets[r];
        const Residual& res = residual_[v];
        if (bounded && res.distance <= worst) break;
        if (v == c) continue;
        double value = 0.0;
        if (bounded && heights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(slot)) >= res.cert.margin) {
          value = res.distance;
          ++out_.certificate_skips;
        } else {
          Residual fresh = solve_residual(v, members, res.support);
          value = fresh.distance;
          evals.emplace_back(v, std::move(fresh));
        }
        worst = std::max(worst, value);
        if (bounded && out_of_reach(worst)) {
          aborted = true;
          break;
        }
      }
      if (aborted || out_of_reach(worst)) continue;
      best = std::min(best, worst);
      std::erase_if(contenders, [&](const Scored& s) { return out_of_reach(s.score); });
      contenders.push_back({c, worst, winner_evals ? evals : std::vector<std::pair<Index, Residual>>{}});
    }

    const Scored* winner = nullptr;
    for (const auto& s : contenders) {
      if (s.score <= best + tie && (!winner || s.candidate < winner->candidate)) winner = &s;
    }
    if (!winner) return {kNone, best};
    if (winner_evals) *winner_evals = winner->evals;
    return {winner->candidate, winner->score};
  }

  HullApprox& telemetry() { return out_; }

 private:
  static constexpr Index kNone = std::numeric_limits<Index>::max();

  std::vector<Index> candidate_pool() const {
    std::vector<Index> pool;
    if (cfg_.domain == SelectionDomain::complement) {
      for (Index v = 0; v < n_; ++v) {
        if (pos_[v] == kNone) pool.push_back(v);
      }
    } else {
      pool = outside_;
    }
    if (cfg_.candidate_cap && pool.size() > *cfg_.candidate_cap) {
      std::stable_sort(pool.begin(), pool.end(),
                       [&](Index a, Index b) { return residual_[a].distance > residual_[b].distance; });
      pool.resize(*cfg_.candidate_cap);
      std::sort(pool.begin(), pool.end());
    }
    return pool;
  }

  double current_max() const {
    double worst = 0.0;
    for (Index v : outside_) worst = std::max(worst, residual_[v].distance);
    return worst;
  }

  void rebuild_outside() {
    outside_.clear();
    for (Index v = 0; v < n_; ++v) {
      if (pos_[v] == kNone && residual_[v].distance > zero_thr_) outside_.push_back(v);
    }
  }

  void insert_vertex(Index v) {
    vertices_.insert(std::upper_bound(vertices_.begin(), vertices_.end(), v), v);
    reindex();
  }

  void erase_vertex(Index v) {
    vertices_.erase(std::lower_bound(vertices_.begin(), vertices_.end(), v));
    pos_[v] = kNone;
    reindex();
  }

  void reindex() {
    for (Index k = 0; k < vertices_.size(); ++k) pos_[vertices_[k]] = k;
  }

  Certificate certificate_of(Index v, const ProjectionResult& r) const {
    Certificate c;
    if (r.distance <= 0.0) return c;
    c.normal = (pts_.row(v) - r.nearest_point) / r.distance;
    c.level = c.normal.dot(pts_.row(v));
    c.margin = r.distance - r.absolute_gap / r.distance;
    return c;
  }

  ProjectionResult solve(Index v, std::span<const Index> members, const std::vector<std::pair<Index, double>>& hint) {
    std::vector<double> warm;
    if (!hint.empty()) {
      for (const auto& [idx, w] : hint) weight_scratch_[idx] = w;
      warm.resize(members.size());
      double total = 0.0;
      for (Index k = 0; k < members.size(); ++k) {
        warm[k] = weight_scratch_[members[k]];
        total += warm[k];
      }
      for (const auto& [idx, w] : hint) weight_scratch_[idx] = 0.0;
      if (total <= 0.0) warm.clear();
    }
    ++out_.qp_solve_count;
    try {
      return project_onto_hull(pts_, members, pts_.row(v), cfg_.solver, diam_, warm);
    } catch (const ConvergenceError& e) {
      HullApprox partial = out_;
      partial.vertex_indices = vertices_;
      throw BuildError(std::string("hull build aborted: ") + e.what(), std::move(partial));
    }
  }

  Residual solve_residual(Index v, std::span<const Index> members, const std::vector<std::pair<Index, double>>& hint) {
    const ProjectionResult r = solve(v, members, hint);
    Residual res;
    res.distance = r.distance;
    res.cert = certificate_of(v, r);
    for (Index k = 0; k < members.size(); ++k) {
      const double w = r.weights.alpha[static_cast<Eigen::Index>(k)];
      if (w > 0.0) res.support.emplace_back(members[k], w);
    }
    return res;
  }

  // Sequential pruning: ascending order, each test against the current set.
  // A still-positive certificate margin proves extremity without a solve.
  std::vector<Index> prune_pass() {
    std::vector<Index> removed;
    const std::vector<Index> snapshot = vertices_;
    std::vector<Index> others;
    for (Index x : snapshot) {
      Certificate& cert = vertex_cert_[x];
      if (cert.valid() && cert.margin > zero_thr_) continue;
      if (vertices_.size() == 1) continue;
      others.clear();
      for (Index y : vertices_) {
        if (y != x) others.push_back(y);
      }
      const ProjectionResult r = solve(x, others, {});
      if (is_zero_distance(r, cfg_.solver)) {
        erase_vertex(x);
        removed.push_back(x);
        ++out_.pruned_vertices;
      } else {
        cert = certificate_of(x, r);
      }
    }
    return removed;
  }

  void expand(Index chosen, std::vector<std::pair<Index, Residual>>& cached, Clock::time_point t0) {
    if (chosen == kNone) fail("no candidate available for expansion", t0);
    // Tighten every vertex certificate against the new point.
    const ConstVecMap w = pts_.row(chosen);
    for (Index x : vertices_) {
      Certificate& cert = vertex_cert_[x];
      if (cert.valid()) cert.margin = std::min(cert.margin, cert.level - cert.normal.dot(w));
    }
    vertex_cert_[chosen] = residual_[chosen].cert;
    insert_vertex(chosen);
    residual_[chosen] = Residual{};
    const std::vector<Index> removed = prune_pass();

    auto touches_removed = [&](const Residual& r) {
      return std::any_of(r.support.begin(), r.support.end(), [&](const auto& s) {
        return std::find(removed.begin(), removed.end(), s.first) != removed.end();
      });
    };
    std::sort(cached.begin(), cached.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (Index v : outside_) {
      if (v == chosen) continue;
      Residual& res = residual_[v];
      if (!cfg_.bounded_scoring) {
        res = solve_residual(v, vertices_, res.support);
        continue;
      }
      if (!touches_removed(res) && res.cert.valid() && res.cert.level - res.cert.normal.dot(w) >= res.cert.margin) {
        ++out_.certificate_skips;
        continue;
      }
      auto hit = std::lower_bound(cached.begin(), cached.end(), v,
                                  [](const auto& entry, Index key) { return entry.first < key; });
      if (hit != cached.end() && hit->first == v && !touches_removed(hit->second)) {
        res = std::move(hit->second);
        continue;
      }
      res = solve_residual(v, vertices_, res.support);
    }
    std::vector<Index> still;
    for (Index v : outside_) {
      if (v != chosen && residual_[v].distance > zero_thr_) still.push_back(v);
    }
    outside_.swap(still);
  }

  [[noreturn]] void fail(const std::string& why, Clock::time_point t0) {
    HullApprox partial = out_;
    partial.vertex_indices = vertices_;
    partial.max_residual = current_max();
    partial.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    throw BuildError(why, std::move(partial));
  }

  HullApprox finish(Clock::time_point t0) {
    out_.vertex_indices = vertices_;
    out_.max_residual = current_max();
    out_.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    return out_;
  }

  const PointSet& pts_;
  BuilderConfig cfg_;
  Index n_;
  double diam_ = 0.0;
  double zero_thr_ = 0.0;
  std::vector<Index> vertices_;
  std::vector<Index> pos_;
  std::vector<Certificate> vertex_cert_;
  std::vector<Residual> residual_;
  std::vector<Index> outside_;
  std::vector<double> weight_scratch_;
  HullApprox out_;
};

std::vector<Index> diameter_pair(const PointSet& points) {
  const auto& m = points.matrix();
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  (m.rowwise() - m.row(0)).rowwise().squaredNorm().maxCoeff(&a);
  (m.rowwise() - m.row(a)).rowwise().squaredNorm().maxCoeff(&b);
  return {static_cast<Index>(a), static_cast<Index>(b)};
}

}  // namespace

Selection expansion_select(const PointSet& points, std::span<const Index> current, std::span<const Index> outside,
                           const BuilderConfig& cfg) {
  if (current.empty()) throw InputError("expansion_select needs a nonempty current set");
  GreedyBuilder builder(points, cfg, "select");
  builder.load(current, outside);
  return builder.select(nullptr);
}

std::vector<Index> prune_vertices(const PointSet& points, std::span<const Index> current, const SolverConfig& cfg,
                                  double scale) {
  if (current.empty()) throw InputError("prune_vertices needs a nonempty set");
  std::vector<Index> kept(current.begin(), current.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  const std::vector<Index> order = kept;
  std::vector<Index> others;
  for (Index x : order) {
    if (kept.size() == 1) break;
    others.clear();
    for (Index y : kept) {
      if (y != x) others.push_back(y);
    }
    const ProjectionResult r = project_onto_hull(points, others, points.row(x), cfg, scale);
    if (is_zero_distance(r, cfg)) kept.erase(std::find(kept.begin(), kept.end(), x));
  }
  return kept;
}

HullApprox build_revised_ge(const PointSet& points, const BuilderConfig& cfg) {
  if (points.empty()) throw InputError("build_revised_ge needs at least one point");
  const auto t0 = Clock::now();
  GreedyBuilder builder(points, cfg, "revised-ge");
  const Index k = cfg.resolved_init_count(points.size(), points.dim());
  std::vector<Index> start = cfg.init == InitMethod::seminmf
                                 ? init_seminmf(points, k, cfg.seminmf_iters, cfg.seed)
                                 : init_direction_extremes(points, k, cfg.seed);
  return builder.run(std::move(start), t0);
}

HullApprox build_ge(const PointSet& points, const BuilderConfig& cfg) {
  if (points.size() < 2) throw InputError("build_ge needs at least two points");
  const auto t0 = Clock::now();
  GreedyBuilder builder(points, cfg, "ge");
  return builder.run(diameter_pair(points), t0);
}

HullApprox build_init_only(const PointSet& points, const BuilderConfig& cfg) {
  if (points.empty()) throw InputError("build_init_only needs at least one point");
  cfg.validate();
  const auto t0 = Clock::now();
  const Index k = cfg.resolved_init_count(points.size(), points.dim());
  HullApprox out;
  out.vertex_indices = cfg.init == InitMethod::seminmf ? init_seminmf(points, k, cfg.seminmf_iters, cfg.seed)
                                                       : init_direction_extremes(points, k, cfg.seed);
  out.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  out.algorithm = cfg.init == InitMethod::seminmf ? "kcha" : "directions";
  out.init_size = out.vertex_indices.size();
  const Diameter dia = diameter(points);
  out.diameter = dia.value;
  out.diameter_exact = dia.exact;
  out.epsilon_rel = cfg.epsilon_rel;
  out.epsilon = cfg.epsilon_rel * dia.value;
  out.max_residual = max_hull_residual(points, out.vertex_indices, cfg.solver, dia.value);
  out.residual_trace.push_back(out.max_residual);
  return out;
}

double max_hull_residual(const PointSet& points, std::span<const Index> vertices, const SolverConfig& cfg,
                         double scale) {
  double worst = 0.0;
  for (Index v = 0; v < points.size(); ++v) {
    if (std::find(vertices.begin(), vertices.end(), v) != vertices.end()) continue;
    worst = std::max(worst, project_onto_hull(points, vertices, points.row(v), cfg, scale).distance);
  }
  return worst;
}

}  // namespace acthull

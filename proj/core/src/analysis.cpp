#include "acthull/analysis.hpp"

#include "acthull/errors.hpp"
#include "acthull/geometry.hpp"
#include "acthull/parallel.hpp"
#include "acthull/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace acthull {

namespace {

std::vector<int> present_classes(const LabeledVectors& data) {
  std::vector<int> out(data.labels.begin(), data.labels.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Seed for one (a, b) cell, independent of evaluation order.
std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed ^ (a * 0x9E3779B97F4A7C15ULL) ^ (b * 0xC2B2AE3D27D4EB4FULL + 0x165667B19E3779F9ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using PairList = std::vector<std::pair<Index, Index>>;

// Unordered pairs within `rows`: all of them, or `cap` uniform draws.
PairList inner_pairs(const std::vector<Index>& rows, Index cap, std::uint64_t seed, bool& sampled) {
  const Index n = rows.size();
  const Index total = n * (n - 1) / 2;
  PairList pairs;
  sampled = total > cap;
  if (!sampled) {
    pairs.reserve(total);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) pairs.emplace_back(rows[i], rows[j]);
    }
    return pairs;
  }
  Rng rng(seed);
  pairs.reserve(cap);
  while (pairs.size() < cap) {
    const auto i = rng.index(n);
    const auto j = rng.index(n);
    if (i != j) pairs.emplace_back(rows[i], rows[j]);
  }
  return pairs;
}

PairList cross_pairs(const std::vector<Index>& a, const std::vector<Index>& b, Index cap, std::uint64_t seed,
                     bool& sampled) {
  PairList pairs;
  sampled = a.size() * b.size() > cap;
  if (!sampled) {
    pairs.reserve(a.size() * b.size());
    for (Index i : a) {
      for (Index j : b) pairs.emplace_back(i, j);
    }
    return pairs;
  }
  Rng rng(seed);
  pairs.reserve(cap);
  for (Index k = 0; k < cap; ++k) pairs.emplace_back(a[rng.index(a.size())], b[rng.index(b.size())]);
  return pairs;
}

// Distances of every pair, computed in parallel into fixed slots.
std::vector<double> pair_distances(const PointSet& points, const PairList& pairs) {
  std::vector<double> out(pairs.size());
  constexpr Index kChunk = 4096;
  const Index chunks = (pairs.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](Index c) {
    const Index hi = std::min(pairs.size(), (c + 1) * kChunk);
    for (Index k = c * kChunk; k < hi; ++k) {
      out[k] = (points.row(pairs[k].first) - points.row(pairs[k].second)).norm();
    }
  });
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<ExtremeAudit> audit_all_extreme(const ActivationSet& acts, const SolverConfig& cfg) {
  cfg.validate();
  const auto& data = acts.data;
  std::vector<ExtremeAudit> out;
  for (int c : present_classes(data)) {
    const auto rows = data.indices_of(c);
    ExtremeAudit audit;
    audit.layer_index = acts.layer_index;
    audit.class_label = c;
    audit.total = rows.size();
    if (rows.size() < 2) {
      out.push_back(std::move(audit));
      continue;
    }
    const double scale = diameter(data.vectors.subset(rows)).value;
    // 1 = interior, 0 = extreme, -1 = solver failure
    std::vector<int> verdict(rows.size(), 0);
    std::vector<std::string> messages(rows.size());
    parallel_for(rows.size(), [&](Index k) {
      std::vector<Index> others;
      others.reserve(rows.size() - 1);
      for (Index j = 0; j < rows.size(); ++j) {
        if (j != k) others.push_back(rows[j]);
      }
      try {
        const auto r = project_onto_hull(data.vectors, others, data.vectors.row(rows[k]), cfg, scale);
        verdict[k] = is_zero_distance(r, cfg) ? 1 : 0;
      } catch (const Error& e) {
        verdict[k] = -1;
        messages[k] = e.what();
      }
    });
    for (Index k = 0; k < rows.size(); ++k) {
      if (verdict[k] == 1) audit.non_extreme_indices.push_back(rows[k]);
      if (verdict[k] == -1) audit.failures.push_back({rows[k], messages[k]});
    }
    audit.non_extreme = audit.non_extreme_indices.size();
    out.push_back(std::move(audit));
  }
  return out;
}

InclusionAudit audit_mis_inclusion(const ActivationSet& acts, std::span<const PointSet> class_hulls,
                                   const SolverConfig& cfg) {
  cfg.validate();
  const auto& data = acts.data;
  for (const auto& hull : class_hulls) {
    if (!hull.empty() && hull.dim() != data.dim()) throw InputError("hull dimension does not match the activations");
  }
  std::vector<double> scales(class_hulls.size(), 0.0);
  for (Index c = 0; c < class_hulls.size(); ++c) {
    if (!class_hulls[c].empty()) scales[c] = diameter(class_hulls[c]).value;
  }

  struct Slot {
    Index tested = 0;
    std::vector<InclusionViolation> hits;
    std::vector<SolveFailure> failures;
  };
  std::vector<Slot> slots(data.size());
  parallel_for(data.size(), [&](Index i) {
    const int own = data.labels[i];
    for (Index c = 0; c < class_hulls.size(); ++c) {
      if (static_cast<int>(c) == own || class_hulls[c].empty()) continue;
      const auto& hull = class_hulls[c];
      std::vector<Index> all(hull.size());
      std::iota(all.begin(), all.end(), Index{0});
      ++slots[i].tested;
      try {
        const auto r = project_onto_hull(hull, all, data.vectors.row(i), cfg, scales[c]);
        if (is_zero_distance(r, cfg)) slots[i].hits.push_back({i, own, static_cast<int>(c), r.distance});
      } catch (const Error& e) {
        slots[i].failures.push_back({i, e.what()});
      }
    }
  });

  InclusionAudit audit;
  audit.layer_index = acts.layer_index;
  audit.split = acts.split;
  for (auto& s : slots) {
    audit.pairs_tested += s.tested;
    audit.violations.insert(audit.violations.end(), s.hits.begin(), s.hits.end());
    audit.failures.insert(audit.failures.end(), s.failures.begin(), s.failures.end());
  }
  return audit;
}

DistanceHistogram inner_class_histogram(const ActivationSet& acts, int class_label, Index bins, Index pair_cap,
                                        std::uint64_t seed) {
  if (bins < 1) throw InputError("histogram needs at least one bin");
  if (pair_cap < 1) throw InputError("pair_cap must be >= 1");
  const auto rows = acts.data.indices_of(class_label);
  if (rows.empty()) throw InputError("class " + std::to_string(class_label) + " is absent");
  if (rows.size() < 2) throw InputError("class " + std::to_string(class_label) + " has fewer than 2 vectors");

  DistanceHistogram h;
  h.layer_index = acts.layer_index;
  h.class_label = class_label;
  const auto pairs = inner_pairs(rows, pair_cap, cell_seed(seed, static_cast<std::uint64_t>(class_label), 0), h.sampled);
  const auto dist = pair_distances(acts.data.vectors, pairs);
  h.pairs = dist.size();
  h.mean_distance = mean_of(dist);

  const double hi = *std::max_element(dist.begin(), dist.end());
  const double width = hi / static_cast<double>(bins);
  h.bin_edges.resize(bins + 1);
  for (Index b = 0; b <= bins; ++b) h.bin_edges[b] = b == bins ? hi : width * static_cast<double>(b);
  h.counts.assign(bins, 0);
  for (double d : dist) {
    const Index b = width > 0.0 ? std::min(bins - 1, static_cast<Index>(d / width)) : 0;
    ++h.counts[b];
  }
  const auto peak = static_cast<Index>(std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin());
  h.peak_bin_center = 0.5 * (h.bin_edges[peak] + h.bin_edges[peak + 1]);
  return h;
}

double layer_mean_distance(const ActivationSet& acts, Index pair_cap, std::uint64_t seed) {
  if (acts.data.size() < 2) throw InputError("mean distance needs at least 2 vectors");
  std::vector<Index> rows(acts.data.size());
  std::iota(rows.begin(), rows.end(), Index{0});
  bool sampled = false;
  return mean_of(pair_distances(acts.data.vectors, inner_pairs(rows, pair_cap, seed, sampled)));
}

InterClassMatrix inter_class_matrix(const ActivationSet& acts, Index pair_cap, std::uint64_t seed) {
  if (pair_cap < 1) throw InputError("pair_cap must be >= 1");
  const auto& data = acts.data;
  InterClassMatrix m;
  m.layer_index = acts.layer_index;
  m.classes = present_classes(data);
  const auto k = static_cast<Eigen::Index>(m.classes.size());
  if (k == 0) throw InputError("inter-class matrix needs at least one vector");
  m.matrix = Eigen::MatrixXd::Zero(k, k);
  m.sampled = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(k, k, false);

  std::vector<std::vector<Index>> rows;
  for (int c : m.classes) rows.push_back(data.indices_of(c));
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      const auto s = cell_seed(seed, static_cast<std::uint64_t>(a) + 1, static_cast<std::uint64_t>(b) + 1);
      bool sampled = false;
      const auto pairs = a == b ? inner_pairs(rows[a], pair_cap, s, sampled)
                                : cross_pairs(rows[a], rows[b], pair_cap, s, sampled);
      const double mean = mean_of(pair_distances(data.vectors, pairs));
      m.matrix(a, b) = m.matrix(b, a) = mean;
      m.sampled(a, b) = m.sampled(b, a) = sampled;
    }
  }
  return m;
}

InnerInterCorrelation inner_inter_correlation(const InterClassMatrix& m) {
  const auto k = m.matrix.rows();
  if (k < 3) throw InputError("inner-inter correlation needs at least 3 classes");
  InnerInterCorrelation out;
  out.classes = m.classes;
  for (Eigen::Index c = 0; c < k; ++c) {
    out.inner.push_back(m.matrix(c, c));
    out.inter.push_back((m.matrix.row(c).sum() - m.matrix(c, c)) / static_cast<double>(k - 1));
  }
  const Eigen::Map<const Vector> x(out.inner.data(), k);
  const Eigen::Map<const Vector> y(out.inter.data(), k);
  const Vector dx = x.array() - x.mean();
  const Vector dy = y.array() - y.mean();
  const double denom = dx.norm() * dy.norm();
  out.pearson = denom > 0.0 ? dx.dot(dy) / denom : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::vector<RadiusStats> class_radius_stats(const ActivationSet& acts) {
  const auto& data = acts.data;
  if (data.size() == 0) throw InputError("radius statistics need at least one vector");
  const Vector centroid = data.vectors.matrix().colwise().mean().transpose();
  std::vector<RadiusStats> out;
  for (int c : present_classes(data)) {
    RadiusStats s;
    s.class_label = c;
    std::vector<double> radii;
    for (Index i : data.indices_of(c)) radii.push_back((data.vectors.row(i) - centroid).norm());
    s.count = radii.size();
    s.mean = mean_of(radii);
    double var = 0.0;
    for (double r : radii) var += (r - s.mean) * (r - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(radii.size()));
    out.push_back(s);
  }
  return out;
}

}  // namespace acthull

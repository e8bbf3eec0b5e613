#include "acthull/toy_data.hpp"

#include "acthull/errors.hpp"
#include "acthull/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace acthull {

int LabeledVectors::n_classes() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

std::vector<Index> LabeledVectors::indices_of(int label) const {
  std::vector<Index> rows;
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) rows.push_back(i);
  }
  return rows;
}

void LabeledVectors::validate() const {
  if (labels.size() != vectors.size()) {
    throw InputError("labels (" + std::to_string(labels.size()) + ") and vectors (" +
                     std::to_string(vectors.size()) + ") differ in length");
  }
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw InputError("negative label at row " + std::to_string(i));
  }
}

LabeledVectors LabeledVectors::subset(std::span<const Index> rows) const {
  LabeledVectors out;
  out.vectors = vectors.subset(rows);
  out.labels.reserve(rows.size());
  for (Index r : rows) out.labels.push_back(labels.at(r));
  out.class_names = class_names;
  return out;
}

LabeledVectors LabeledVectors::head(Index k) const {
  std::vector<Index> rows(std::min(k, size()));
  for (Index i = 0; i < rows.size(); ++i) rows[i] = i;
  return subset(rows);
}

void ToySpec::validate() const {
  if (n < 1) throw InputError("toy dataset needs n >= 1");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw InputError("toy noise must be >= 0");
}

ToyKind toy_kind_from_string(const std::string& s) {
  if (s == "center") return ToyKind::center;
  if (s == "circles") return ToyKind::circles;
  if (s == "moons") return ToyKind::moons;
  if (s == "centers") return ToyKind::centers;
  throw InputError("unknown toy kind '" + s + "' (expected center|circles|moons|centers)");
}

const char* to_string(ToyKind kind) {
  switch (kind) {
    case ToyKind::center: return "center";
    case ToyKind::circles: return "circles";
    case ToyKind::moons: return "moons";
    case ToyKind::centers: return "centers";
  }
  return "?";
}

LabeledVectors gen_toy(const ToySpec& spec) {
  spec.validate();
  using std::numbers::pi;
  const auto n = static_cast<Eigen::Index>(spec.n);
  RowMatrix m(n, 2);
  std::vector<int> labels(spec.n, 0);
  Rng rng(spec.seed);

  switch (spec.kind) {
    case ToyKind::center:
      for (Eigen::Index i = 0; i < n; ++i) {
        m(i, 0) = rng.normal();
        m(i, 1) = rng.normal();
      }
      break;
    case ToyKind::circles: {
      const Eigen::Index outer = (n + 1) / 2;
      for (Eigen::Index i = 0; i < n; ++i) {
        const bool is_outer = i < outer;
        const Eigen::Index count = is_outer ? outer : n - outer;
        const Eigen::Index k = is_outer ? i : i - outer;
        const double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
        const double r = is_outer ? 1.0 : 0.5;
        m(i, 0) = r * std::cos(t);
        m(i, 1) = r * std::sin(t);
        labels[static_cast<Index>(i)] = is_outer ? 0 : 1;
      }
      break;
    }
    case ToyKind::moons: {
      const Eigen::Index outer = (n + 1) / 2;
      for (Eigen::Index i = 0; i < n; ++i) {
        const bool is_outer = i < outer;
        const Eigen::Index count = is_outer ? outer : n - outer;
        const Eigen::Index k = is_outer ? i : i - outer;
        const double t = count > 1 ? pi * static_cast<double>(k) / static_cast<double>(count - 1) : 0.0;
        if (is_outer) {
          m(i, 0) = std::cos(t);
          m(i, 1) = std::sin(t);
        } else {
          m(i, 0) = 1.0 - std::cos(t);
          m(i, 1) = 0.5 - std::sin(t);
        }
        labels[static_cast<Index>(i)] = is_outer ? 0 : 1;
      }
      break;
    }
    case ToyKind::centers: {
      constexpr double kCenters[4][2] = {{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}, {4.0, 4.0}};
      for (Eigen::Index i = 0; i < n; ++i) {
        const int c = static_cast<int>(i % 4);
        m(i, 0) = kCenters[c][0] + rng.normal();
        m(i, 1) = kCenters[c][1] + rng.normal();
        labels[static_cast<Index>(i)] = c;
      }
      break;
    }
  }
  if (spec.noise > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, 0) += spec.noise * rng.normal();
      m(i, 1) += spec.noise * rng.normal();
    }
  }
  LabeledVectors out;
  out.vectors = PointSet(std::move(m));
  out.labels = std::move(labels);
  return out;
}

}  // namespace acthull

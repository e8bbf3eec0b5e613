#pragma once

#include "acthull/dataset.hpp"

#include <cstdint>
#include <string>

namespace acthull {

enum class ToyKind { center, circles, moons, centers };

/// Two-dimensional toy generators with fixed geometry:
///   center   one N(0, I) blob, 1 class
///   circles  rings of radius 1 and 0.5, evenly spaced angles, 2 classes
///   moons    two interleaved half circles, inner one shifted by (1, -0.5), 2 classes
///   centers  four N(mu, I) blobs on a square of side 4, 4 classes
/// `noise` is the stddev of isotropic Gaussian jitter added to every point.
struct ToySpec {
  ToyKind kind = ToyKind::center;
  Index n = 200;
  double noise = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

LabeledVectors gen_toy(const ToySpec& spec);

ToyKind toy_kind_from_string(const std::string& s);
const char* to_string(ToyKind kind);

}  // namespace acthull

#pragma once

#include "acthull/dataset.hpp"

#include <optional>
#include <string>

namespace acthull {

/// MNIST-style IDX pair: images (magic 0x00000803, u8 pixels) and labels
/// (magic 0x00000801). Pixels are scaled to [0, 1] and flattened row-major.
/// `limit` keeps only the first rows.
LabeledVectors load_idx(const std::string& images_path, const std::string& labels_path,
                        std::optional<Index> limit = std::nullopt);

/// CSV with a header row; the column named "label" holds integer classes and
/// every other column is a numeric feature.
LabeledVectors load_csv(const std::string& path);
/// Writes "label,f0,f1,..." with round-trip precision.
void save_csv(const LabeledVectors& data, const std::string& path);

/// AVEC binary: "AVEC", u32 version (1), u32 n, u32 d, u32 has_labels, f32
/// features row-major, then u32 labels when present. All little-endian.
/// Files without labels load as class 0.
LabeledVectors load_avec(const std::string& path);
void save_avec(const LabeledVectors& data, const std::string& path);

/// Dispatch on extension: ".csv" is CSV, anything else AVEC.
LabeledVectors load_vectors(const std::string& path);
void save_vectors(const LabeledVectors& data, const std::string& path);

}  // namespace acthull

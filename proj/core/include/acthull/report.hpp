#pragma once

#include "acthull/analysis.hpp"
#include "acthull/baselines.hpp"
#include "acthull/classification.hpp"
#include "acthull/hull_builder.hpp"
#include "acthull/mlp.hpp"

#include <string>
#include <vector>

namespace acthull {

/// Every JSON document carries {"schema": "acthull.<kind>", "version": N}.
inline constexpr int kReportVersion = 1;

std::string to_json(const SolverConfig& cfg);
std::string to_json(const BuilderConfig& cfg);
/// {version, epsilon, vertex_indices, max_residual, telemetry}
std::string to_json(const HullApprox& hull);
HullApprox hull_from_json(const std::string& text);

std::string to_json(const TrainReport& report);
TrainReport train_report_from_json(const std::string& text);

std::string to_json(const std::vector<ExtremeAudit>& audits);
std::string to_json(const InclusionAudit& audit);
std::string to_json(const std::vector<DistanceHistogram>& histograms);
std::string to_json(const InterClassMatrix& m);
std::string to_json(const InnerInterCorrelation& c);
std::string to_json(const std::vector<RadiusStats>& stats);
std::string to_json(const LooReport& report);
std::string to_json(const GapReport& report);
std::string to_json(const BaselineResult& result, const std::string& method);

/// Throws ParseError unless `text` is a JSON object with the expected schema
/// name and a supported version.
void check_schema(const std::string& text, const std::string& schema);

/// bin_lo,bin_hi,count
std::string histogram_csv(const DistanceHistogram& h);
/// Header "class,<c0>,<c1>,..." then one row per class.
std::string matrix_csv(const InterClassMatrix& m);
/// layer,train_accuracy,test_accuracy,gap,gap_ratio per layer, then the MLP row.
std::string gap_csv(const GapReport& report);

/// Nearest-hull model: JSON manifest at `path` plus the stacked vertex sets
/// in AVEC at `path + ".avec"`.
void save_model(const NearestHullModel& model, const std::string& path);
NearestHullModel load_model(const std::string& path);

struct SvgLayer {
  std::vector<Index> indices;
  std::string label;
  std::string color = "#d62728";
  bool cross = true;  // crosses, else rings
};

/// Scatter of a 2D set with each layer's points drawn on top.
std::string hull_svg(const PointSet& points, std::span<const int> labels, std::span<const SvgLayer> layers,
                     const std::string& title = {});

/// Writes `content` to `path`, throwing IoError on failure.
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace acthull

#pragma once

#include "manifest.hpp"

#include "acthull/hull_builder.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace acthull::cli {

struct SolverOpts {
  double gap_tol = 1e-8;
  double zero_tol = 1e-7;

  SolverConfig config() const;
};

struct BuilderOpts {
  double epsilon_rel = 0.01;
  std::string init = "seminmf";
  std::optional<Index> init_count;
  std::optional<Index> candidate_cap;
  std::string scoring = "bounded";
  std::string domain = "outside";
  Index seminmf_iters = 100;
  std::uint64_t seed = 0;
  SolverOpts solver;

  BuilderConfig config() const;
};

struct GenToyOpts {
  std::string kind = "moons";
  Index n = 200;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string svg;
};

struct ImportIdxOpts {
  std::string images;
  std::string labels;
  std::optional<Index> limit;
  std::string out;
};

struct HullBuildOpts {
  std::string input;
  std::string algo = "revised-ge";
  BuilderOpts builder;
  std::string out;
  std::string svg;
};

struct HullBenchOpts {
  std::vector<std::string> inputs;
  std::vector<std::string> algos{"kcha", "ge", "revised-ge"};
  Index repeats = 1;
  BuilderOpts builder;
  std::string out;
};

struct MlpTrainOpts {
  std::string train;
  std::string test;
  std::vector<Index> widths{64, 64, 64, 64};
  Index epochs = 30;
  double lr = 1e-3;
  Index batch = 32;
  std::uint64_t seed = 0;
  std::string out;
  std::string report;
};

struct MlpExtractOpts {
  std::string model;
  std::string data;
  Index layer = 1;
  std::string split = "train";
  bool pre_activation = false;
  std::string out;
};

struct AnalyzeOpts {
  std::string acts;
  std::string model;
  Index layer = 0;
  Index bins = 50;
  Index pair_cap = 2'000'000;
  std::uint64_t seed = 0;
  SolverOpts solver;
  std::string out;
};

struct ClassifyOpts {
  std::vector<std::string> acts_train;
  std::vector<std::string> acts_test;
  std::string mlp_report;
  std::string loo = "vertex-sets";
  BuilderOpts builder;
  std::string out;
};

struct BaselineOpts {
  std::string train;
  std::string test;
  Index k = 5;
  double lr = 0.5;
  Index iters = 500;
  double l2 = 1e-4;
  double tol = 1e-5;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen_toy(const GenToyOpts& o, RunManifest& m);
void run_import_idx(const ImportIdxOpts& o, RunManifest& m);
void run_hull_build(const HullBuildOpts& o, RunManifest& m);
void run_hull_bench(const HullBenchOpts& o, RunManifest& m);
void run_mlp_train(const MlpTrainOpts& o, RunManifest& m);
void run_mlp_extract(const MlpExtractOpts& o, RunManifest& m);
void run_analyze(const std::string& what, const AnalyzeOpts& o, RunManifest& m);
void run_classify_fit(const ClassifyOpts& o, RunManifest& m);
void run_classify_eval(const ClassifyOpts& o, RunManifest& m);
void run_baseline(const std::string& method, const BaselineOpts& o, RunManifest& m);

}  // namespace acthull::cli

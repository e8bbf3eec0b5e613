#include "acthull/report.hpp"

#include "acthull/errors.hpp"
#include "acthull/io.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace acthull {

namespace {

using Json = nlohmann::ordered_json;

Json envelope(const std::string& kind) {
  Json j;
  j["schema"] = "acthull." + kind;
  j["version"] = kReportVersion;
  return j;
}

// NaN and infinities become null; JSON has no spelling for them.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Json parse(const std::string& text, const std::string& schema) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("schema") || !j.contains("version")) {
    throw ParseError("JSON document lacks schema/version fields");
  }
  if (j["schema"] != "acthull." + schema) {
    throw ParseError("expected schema acthull." + schema + ", found " + j["schema"].dump());
  }
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kReportVersion) {
    throw ParseError("unsupported " + schema + " version " + j["version"].dump());
  }
  return j;
}

template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Json solver_json(const SolverConfig& cfg) {
  Json j;
  j["gap_tol"] = cfg.gap_tol;
  j["zero_tol"] = cfg.zero_tol;
  j["max_iters"] = cfg.max_iters ? Json(*cfg.max_iters) : Json(nullptr);
  return j;
}

SolverConfig solver_from(const Json& j) {
  SolverConfig cfg;
  cfg.gap_tol = j.at("gap_tol").get<double>();
  cfg.zero_tol = j.at("zero_tol").get<double>();
  if (!j.at("max_iters").is_null()) cfg.max_iters = j.at("max_iters").get<Index>();
  return cfg;
}

const char* domain_name(SelectionDomain d) { return d == SelectionDomain::outside ? "outside" : "complement"; }

Json builder_json(const BuilderConfig& cfg) {
  Json j;
  j["epsilon_rel"] = cfg.epsilon_rel;
  j["init"] = to_string(cfg.init);
  j["init_count"] = cfg.init_count ? Json(*cfg.init_count) : Json(nullptr);
  j["candidate_cap"] = cfg.candidate_cap ? Json(*cfg.candidate_cap) : Json(nullptr);
  j["seed"] = cfg.seed;
  j["seminmf_iters"] = cfg.seminmf_iters;
  j["domain"] = domain_name(cfg.domain);
  j["bounded_scoring"] = cfg.bounded_scoring;
  j["solver"] = solver_json(cfg.solver);
  return j;
}

BuilderConfig builder_from(const Json& j) {
  BuilderConfig cfg;
  cfg.epsilon_rel = j.at("epsilon_rel").get<double>();
  cfg.init = init_method_from_string(j.at("init").get<std::string>());
  if (!j.at("init_count").is_null()) cfg.init_count = j.at("init_count").get<Index>();
  if (!j.at("candidate_cap").is_null()) cfg.candidate_cap = j.at("candidate_cap").get<Index>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.seminmf_iters = j.at("seminmf_iters").get<Index>();
  cfg.domain = j.at("domain").get<std::string>() == "complement" ? SelectionDomain::complement : SelectionDomain::outside;
  cfg.bounded_scoring = j.at("bounded_scoring").get<bool>();
  cfg.solver = solver_from(j.at("solver"));
  return cfg;
}

Json hull_json(const HullApprox& h) {
  Json j = envelope("hull");
  j["epsilon"] = h.epsilon;
  j["vertex_indices"] = h.vertex_indices;
  j["max_residual"] = h.max_residual;
  Json t;
  t["algorithm"] = h.algorithm;
  t["epsilon_rel"] = h.epsilon_rel;
  t["diameter"] = h.diameter;
  t["diameter_exact"] = h.diameter_exact;
  t["iterations"] = h.iterations;
  t["qp_solve_count"] = h.qp_solve_count;
  t["certificate_skips"] = h.certificate_skips;
  t["init_size"] = h.init_size;
  t["pruned_vertices"] = h.pruned_vertices;
  t["wall_time"] = h.wall_time;
  t["residual_trace"] = h.residual_trace;
  j["telemetry"] = std::move(t);
  return j;
}

HullApprox hull_from(const Json& j) {
  HullApprox h;
  h.epsilon = j.at("epsilon").get<double>();
  h.vertex_indices = j.at("vertex_indices").get<std::vector<Index>>();
  h.max_residual = j.at("max_residual").get<double>();
  const auto& t = j.at("telemetry");
  h.algorithm = t.at("algorithm").get<std::string>();
  h.epsilon_rel = t.at("epsilon_rel").get<double>();
  h.diameter = t.at("diameter").get<double>();
  h.diameter_exact = t.at("diameter_exact").get<bool>();
  h.iterations = t.at("iterations").get<Index>();
  h.qp_solve_count = t.at("qp_solve_count").get<Index>();
  h.certificate_skips = t.at("certificate_skips").get<Index>();
  h.init_size = t.at("init_size").get<Index>();
  h.pruned_vertices = t.at("pruned_vertices").get<Index>();
  h.wall_time = t.at("wall_time").get<double>();
  h.residual_trace = t.at("residual_trace").get<std::vector<double>>();
  return h;
}

Json failures_json(const std::vector<SolveFailure>& failures) {
  Json arr = Json::array();
  for (const auto& f : failures) arr.push_back({{"vector_index", f.vector_index}, {"message", f.message}});
  return arr;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

}  // namespace

std::string to_json(const SolverConfig& cfg) { return solver_json(cfg).dump(2); }
std::string to_json(const BuilderConfig& cfg) { return builder_json(cfg).dump(2); }
std::string to_json(const HullApprox& hull) { return hull_json(hull).dump(2); }

HullApprox hull_from_json(const std::string& text) {
  const Json j = parse(text, "hull");
  return guarded("hull document", [&] { return hull_from(j); });
}

std::string to_json(const TrainReport& r) {
  Json j = envelope("train_report");
  j["train_accuracy"] = r.train_accuracy;
  j["test_accuracy"] = r.test_accuracy;
  j["gap"] = r.train_accuracy - r.test_accuracy;
  j["epochs"] = r.epochs;
  j["seed"] = r.seed;
  Json curve = Json::array();
  for (double l : r.loss_curve) curve.push_back(number(l));
  j["loss_curve"] = std::move(curve);
  return j.dump(2);
}

TrainReport train_report_from_json(const std::string& text) {
  const Json j = parse(text, "train_report");
  return guarded("train report", [&] {
    TrainReport r;
    r.train_accuracy = j.at("train_accuracy").get<double>();
    r.test_accuracy = j.at("test_accuracy").get<double>();
    r.epochs = j.at("epochs").get<Index>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& l : j.at("loss_curve")) r.loss_curve.push_back(number_from(l));
    return r;
  });
}

std::string to_json(const std::vector<ExtremeAudit>& audits) {
  Json j = envelope("extreme_audit");
  Json rows = Json::array();
  Index total = 0, non_extreme = 0;
  for (const auto& a : audits) {
    rows.push_back({{"layer_index", a.layer_index},
                    {"class_label", a.class_label},
                    {"total", a.total},
                    {"non_extreme", a.non_extreme},
                    {"non_extreme_indices", a.non_extreme_indices},
                    {"failures", failures_json(a.failures)}});
    total += a.total;
    non_extreme += a.non_extreme;
  }
  j["layer_index"] = audits.empty() ? 0 : audits.front().layer_index;
  j["total"] = total;
  j["non_extreme"] = non_extreme;
  j["classes"] = std::move(rows);
  return j.dump(2);
}

std::string to_json(const InclusionAudit& a) {
  Json j = envelope("inclusion_audit");
  j["layer_index"] = a.layer_index;
  j["split"] = a.split;
  j["pairs_tested"] = a.pairs_tested;
  Json v = Json::array();
  for (const auto& x : a.violations) {
    v.push_back({{"vector_index", x.vector_index},
                 {"own_class", x.own_class},
                 {"containing_class", x.containing_class},
                 {"distance", x.distance}});
  }
  j["violation_count"] = a.violations.size();
  j["violations"] = std::move(v);
  j["failures"] = failures_json(a.failures);
  return j.dump(2);
}

std::string to_json(const std::vector<DistanceHistogram>& histograms) {
  Json j = envelope("inner_histograms");
  Json rows = Json::array();
  for (const auto& h : histograms) {
    rows.push_back({{"layer_index", h.layer_index},
                    {"class_label", h.class_label},
                    {"pairs", h.pairs},
                    {"sampled", h.sampled},
                    {"mean_distance", h.mean_distance},
                    {"peak_bin_center", h.peak_bin_center},
                    {"bin_edges", h.bin_edges},
                    {"counts", h.counts}});
  }
  j["histograms"] = std::move(rows);
  return j.dump(2);
}

std::string to_json(const InterClassMatrix& m) {
  Json j = envelope("inter_class_matrix");
  j["layer_index"] = m.layer_index;
  j["classes"] = m.classes;
  Json rows = Json::array(), sampled = Json::array();
  for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
    Json row = Json::array(), srow = Json::array();
    for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) {
      row.push_back(m.matrix(r, c));
      srow.push_back(static_cast<bool>(m.sampled(r, c)));
    }
    rows.push_back(std::move(row));
    sampled.push_back(std::move(srow));
  }
  j["matrix"] = std::move(rows);
  j["sampled"] = std::move(sampled);
  return j.dump(2);
}

std::string to_json(const InnerInterCorrelation& c) {
  Json j = envelope("inner_inter_correlation");
  j["classes"] = c.classes;
  j["inner"] = c.inner;
  j["inter"] = c.inter;
  j["pearson"] = number(c.pearson);
  return j.dump(2);
}

std::string to_json(const std::vector<RadiusStats>& stats) {
  Json j = envelope("radius_stats");
  Json rows = Json::array();
  for (const auto& s : stats) {
    rows.push_back({{"class_label", s.class_label}, {"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}});
  }
  j["classes"] = std::move(rows);
  return j.dump(2);
}

std::string to_json(const LooReport& r) {
  Json j = envelope("loo_report");
  j["accuracy"] = r.accuracy;
  j["evaluated"] = r.evaluated;
  j["skipped"] = r.skipped;
  return j.dump(2);
}

std::string to_json(const GapReport& r) {
  Json j = envelope("gap_report");
  Json rows = Json::array();
  for (const auto& l : r.layers) {
    rows.push_back({{"layer_index", l.layer_index},
                    {"train_accuracy", l.train_accuracy},
                    {"test_accuracy", l.test_accuracy},
                    {"gap", l.gap},
                    {"gap_ratio", number(l.gap_ratio)},
                    {"below_mlp_gap", l.below_mlp_gap}});
  }
  j["layers"] = std::move(rows);
  j["mlp"] = {{"train_accuracy", r.mlp_train_accuracy}, {"test_accuracy", r.mlp_test_accuracy}, {"gap", r.mlp_gap}};
  j["test_monotone_decreasing"] = r.test_monotone_decreasing;
  return j.dump(2);
}

std::string to_json(const BaselineResult& result, const std::string& method) {
  Json j = envelope("baseline");
  j["method"] = method;
  j["train_accuracy"] = result.train_accuracy;
  j["test_accuracy"] = result.test_accuracy;
  return j.dump(2);
}

void check_schema(const std::string& text, const std::string& schema) { parse(text, schema); }

std::string histogram_csv(const DistanceHistogram& h) {
  std::ostringstream s;
  s << "bin_lo,bin_hi,count\n";
  for (Index b = 0; b < h.counts.size(); ++b) {
    s << fmt(h.bin_edges[b]) << ',' << fmt(h.bin_edges[b + 1]) << ',' << h.counts[b] << '\n';
  }
  return s.str();
}

std::string matrix_csv(const InterClassMatrix& m) {
  std::ostringstream s;
  s << "class";
  for (int c : m.classes) s << ',' << c;
  s << '\n';
  for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
    s << m.classes[static_cast<Index>(r)];
    for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) s << ',' << fmt(m.matrix(r, c));
    s << '\n';
  }
  return s.str();
}

std::string gap_csv(const GapReport& r) {
  std::ostringstream s;
  s << "layer,train_accuracy,test_accuracy,gap,gap_ratio\n";
  for (const auto& l : r.layers) {
    s << l.layer_index << ',' << fmt(l.train_accuracy) << ',' << fmt(l.test_accuracy) << ',' << fmt(l.gap) << ','
      << fmt(l.gap_ratio) << '\n';
  }
  s << "mlp," << fmt(r.mlp_train_accuracy) << ',' << fmt(r.mlp_test_accuracy) << ',' << fmt(r.mlp_gap) << ",1\n";
  return s.str();
}

void save_model(const NearestHullModel& model, const std::string& path) {
  const std::string vertex_path = path + ".avec";
  Json j = envelope("nearest_hull_model");
  j["classes"] = model.classes;
  j["vertex_rows"] = model.vertex_rows;
  j["scale"] = model.scale;
  j["solver"] = solver_json(model.solver);
  j["builder"] = builder_json(model.builder);
  Json builds = Json::array();
  for (const auto& b : model.builds) builds.push_back(hull_json(b));
  j["builds"] = std::move(builds);
  j["vertices_file"] = std::filesystem::path(vertex_path).filename().string();

  Index rows = 0;
  for (const auto& vs : model.vertex_sets) rows += vs.size();
  RowMatrix stacked(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(model.dim()));
  LabeledVectors all;
  Index at = 0;
  for (Index c = 0; c < model.classes.size(); ++c) {
    const auto& vs = model.vertex_sets[c];
    stacked.middleRows(static_cast<Eigen::Index>(at), static_cast<Eigen::Index>(vs.size())) = vs.matrix();
    at += vs.size();
    all.labels.insert(all.labels.end(), vs.size(), model.classes[c]);
  }
  all.vectors = PointSet(std::move(stacked));
  save_avec(all, vertex_path);
  write_text(path, j.dump(2) + "\n");
}

NearestHullModel load_model(const std::string& path) {
  const Json j = parse(read_text(path), "nearest_hull_model");
  NearestHullModel model = guarded("model manifest", [&] {
    NearestHullModel m;
    m.classes = j.at("classes").get<std::vector<int>>();
    m.vertex_rows = j.at("vertex_rows").get<std::vector<std::vector<Index>>>();
    m.scale = j.at("scale").get<double>();
    m.solver = solver_from(j.at("solver"));
    m.builder = builder_from(j.at("builder"));
    for (const auto& b : j.at("builds")) m.builds.push_back(hull_from(b));
    return m;
  });
  const auto dir = std::filesystem::path(path).parent_path();
  const auto vertices = load_avec((dir / j.at("vertices_file").get<std::string>()).string());
  if (model.builds.size() != model.classes.size() || model.vertex_rows.size() != model.classes.size()) {
    throw ParseError(path + ": class count mismatch between fields");
  }
  for (Index c = 0; c < model.classes.size(); ++c) {
    const auto rows = vertices.indices_of(model.classes[c]);
    if (rows.size() != model.vertex_rows[c].size() || rows.empty()) {
      throw ParseError(path + ": vertex file does not match class " + std::to_string(model.classes[c]));
    }
    model.vertex_sets.push_back(vertices.vectors.subset(rows));
  }
  return model;
}

std::string hull_svg(const PointSet& points, std::span<const int> labels, std::span<const SvgLayer> layers,
                     const std::string& title) {
  if (points.dim() != 2) throw InputError("SVG scatter needs 2D points, got d=" + std::to_string(points.dim()));
  constexpr double kSize = 600.0, kMargin = 30.0;
  const auto& m = points.matrix();
  const double x0 = m.col(0).minCoeff(), x1 = m.col(0).maxCoeff();
  const double y0 = m.col(1).minCoeff(), y1 = m.col(1).maxCoeff();
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double k = (kSize - 2 * kMargin) / span;
  auto px = [&](Index i) { return kMargin + (m(static_cast<Eigen::Index>(i), 0) - x0) * k; };
  auto py = [&](Index i) { return kSize - kMargin - (m(static_cast<Eigen::Index>(i), 1) - y0) * k; };
  static constexpr const char* kPalette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#17becf", "#bcbd22"};

  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\" viewBox=\"0 0 "
    << kSize << ' ' << kSize << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    std::string safe;
    for (char c : title) {
      if (c == '<') safe += "&lt;";
      else if (c == '>') safe += "&gt;";
      else if (c == '&') safe += "&amp;";
      else safe += c;
    }
    s << "<text x=\"" << kMargin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << safe << "</text>\n";
  }
  s << "<g id=\"points\">\n";
  for (Index i = 0; i < points.size(); ++i) {
    const int lab = i < labels.size() ? labels[i] : 0;
    s << "<circle cx=\"" << px(i) << "\" cy=\"" << py(i) << "\" r=\"2.5\" fill=\"" << kPalette[lab % 6] << "\"/>\n";
  }
  s << "</g>\n";
  for (const auto& layer : layers) {
    s << "<g class=\"selected\" stroke=\"" << layer.color << "\" fill=\"none\" stroke-width=\"1.5\">\n";
    for (Index i : layer.indices) {
      if (i >= points.size()) throw InputError("SVG layer index out of range");
      if (layer.cross) {
        s << "<path d=\"M" << px(i) - 5 << ' ' << py(i) - 5 << "L" << px(i) + 5 << ' ' << py(i) + 5 << "M"
          << px(i) - 5 << ' ' << py(i) + 5 << "L" << px(i) + 5 << ' ' << py(i) - 5 << "\"/>\n";
      } else {
        s << "<circle cx=\"" << px(i) << "\" cy=\"" << py(i) << "\" r=\"6\"/>\n";
      }
    }
    s << "</g>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("short write to " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace acthull

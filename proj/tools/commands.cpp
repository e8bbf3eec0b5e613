#include "commands.hpp"

#include "acthull/analysis.hpp"
#include "acthull/baselines.hpp"
#include "acthull/classification.hpp"
#include "acthull/errors.hpp"
#include "acthull/geometry.hpp"
#include "acthull/io.hpp"
#include "acthull/mlp.hpp"
#include "acthull/report.hpp"
#include "acthull/toy_data.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>

namespace acthull::cli {

namespace {

using Json = nlohmann::ordered_json;

// `path` with its extension replaced by `ext`.
std::string sibling(const std::string& path, const std::string& ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

LabeledVectors load_input(const std::string& path, RunManifest& m) {
  m.add_input(path);
  return load_vectors(path);
}

void emit(const std::string& path, const std::string& content, RunManifest& m) {
  write_text(path, content);
  m.add_output(path);
}

HullApprox build_with(const std::string& algo, const PointSet& points, BuilderConfig cfg) {
  if (algo == "revised-ge") return build_revised_ge(points, cfg);
  if (algo == "ge") return build_ge(points, cfg);
  if (algo == "kcha") {
    cfg.init = InitMethod::seminmf;
    return build_init_only(points, cfg);
  }
  throw InputError("unknown algorithm '" + algo + "' (expected revised-ge, ge or kcha)");
}

ActivationSet as_activations(LabeledVectors data, Index layer, const std::string& split) {
  ActivationSet acts;
  acts.layer_index = layer;
  acts.split = split;
  acts.data = std::move(data);
  return acts;
}

}  // namespace

SolverConfig SolverOpts::config() const {
  SolverConfig cfg;
  cfg.gap_tol = gap_tol;
  cfg.zero_tol = zero_tol;
  cfg.validate();
  return cfg;
}

BuilderConfig BuilderOpts::config() const {
  BuilderConfig cfg;
  cfg.epsilon_rel = epsilon_rel;
  cfg.init = init_method_from_string(init);
  cfg.init_count = init_count;
  cfg.candidate_cap = candidate_cap;
  if (scoring != "bounded" && scoring != "exhaustive") {
    throw InputError("unknown scoring '" + scoring + "' (expected bounded or exhaustive)");
  }
  cfg.bounded_scoring = scoring == "bounded";
  if (domain != "outside" && domain != "complement") {
    throw InputError("unknown domain '" + domain + "' (expected outside or complement)");
  }
  cfg.domain = domain == "outside" ? SelectionDomain::outside : SelectionDomain::complement;
  cfg.seminmf_iters = seminmf_iters;
  cfg.seed = seed;
  cfg.solver = solver.config();
  cfg.validate();
  return cfg;
}

void run_gen_toy(const GenToyOpts& o, RunManifest& m) {
  ToySpec spec;
  spec.kind = toy_kind_from_string(o.kind);
  spec.n = o.n;
  spec.noise = o.noise;
  spec.seed = o.seed;
  m.set_seed(o.seed);
  const auto data = gen_toy(spec);
  save_vectors(data, o.out);
  m.add_output(o.out);
  if (!o.svg.empty()) emit(o.svg, hull_svg(data.vectors, data.labels, {}, o.kind), m);
}

void run_import_idx(const ImportIdxOpts& o, RunManifest& m) {
  m.add_input(o.images);
  m.add_input(o.labels);
  save_vectors(load_idx(o.images, o.labels, o.limit), o.out);
  m.add_output(o.out);
}

void run_hull_build(const HullBuildOpts& o, RunManifest& m) {
  const auto data = load_input(o.input, m);
  const auto cfg = o.builder.config();
  m.set_seed(cfg.seed);
  const auto hull = build_with(o.algo, data.vectors, cfg);
  emit(o.out, to_json(hull) + "\n", m);
  if (!o.svg.empty()) {
    const SvgLayer selected{hull.vertex_indices, o.algo};
    emit(o.svg, hull_svg(data.vectors, data.labels, {&selected, 1}, o.algo), m);
  }
}

void run_hull_bench(const HullBenchOpts& o, RunManifest& m) {
  if (o.repeats < 1) throw InputError("--repeats must be >= 1");
  const auto cfg = o.builder.config();
  m.set_seed(cfg.seed);
  std::ostringstream csv;
  csv << "dataset,algo,scoring,n,d,epsilon_rel,vertices,max_residual,iterations,qp_solve_count,wall_time_s\n";
  for (const auto& input : o.inputs) {
    const auto data = load_input(input, m);
    for (const auto& algo : o.algos) {
      HullApprox best;
      for (Index r = 0; r < o.repeats; ++r) {
        auto h = build_with(algo, data.vectors, cfg);
        if (r == 0 || h.wall_time < best.wall_time) best = std::move(h);
      }
      csv << std::filesystem::path(input).filename().string() << ',' << algo << ',' << o.builder.scoring << ','
          << data.size() << ',' << data.dim() << ',' << num(cfg.epsilon_rel) << ',' << best.vertex_indices.size()
          << ',' << num(best.max_residual) << ',' << best.iterations << ',' << best.qp_solve_count << ','
          << num(best.wall_time) << '\n';
    }
  }
  emit(o.out, csv.str(), m);
}

void run_mlp_train(const MlpTrainOpts& o, RunManifest& m) {
  const auto train = load_input(o.train, m);
  const auto test = o.test.empty() ? LabeledVectors{} : load_input(o.test, m);
  MlpConfig cfg;
  cfg.layer_widths = o.widths;
  cfg.epochs = o.epochs;
  cfg.lr = o.lr;
  cfg.batch_size = o.batch;
  cfg.seed = o.seed;
  m.set_seed(o.seed);
  const auto trained = train_mlp(train, test, cfg);
  trained.model.save(o.out);
  m.add_output(o.out);
  emit(o.report.empty() ? o.out + ".report.json" : o.report, to_json(trained.report) + "\n", m);
}

void run_mlp_extract(const MlpExtractOpts& o, RunManifest& m) {
  m.add_input(o.model);
  const auto model = Mlp::load(o.model);
  const auto data = load_input(o.data, m);
  const auto acts = extract_activations(model, data, o.layer, o.split, o.pre_activation);
  save_vectors(acts.data, o.out);
  m.add_output(o.out);
}

void run_analyze(const std::string& what, const AnalyzeOpts& o, RunManifest& m) {
  const auto acts = as_activations(load_input(o.acts, m), o.layer, "train");
  m.set_seed(o.seed);
  const auto solver = o.solver.config();

  if (what == "extreme") {
    emit(o.out, to_json(audit_all_extreme(acts, solver)) + "\n", m);
  } else if (what == "inclusion") {
    if (o.model.empty()) throw InputError("analyze inclusion needs --model (from classify fit)");
    m.add_input(o.model);
    m.add_input(o.model + ".avec");
    const auto model = load_model(o.model);
    std::vector<PointSet> hulls(static_cast<Index>(model.classes.back()) + 1);
    for (Index c = 0; c < model.classes.size(); ++c) hulls[static_cast<Index>(model.classes[c])] = model.vertex_sets[c];
    emit(o.out, to_json(audit_mis_inclusion(acts, hulls, solver)) + "\n", m);
  } else if (what == "inner-hist") {
    std::vector<DistanceHistogram> hists;
    for (int c = 0; c < acts.data.n_classes(); ++c) {
      if (acts.data.indices_of(c).size() < 2) continue;
      hists.push_back(inner_class_histogram(acts, c, o.bins, o.pair_cap, o.seed));
      emit(sibling(o.out, ".class" + std::to_string(c) + ".csv"), histogram_csv(hists.back()), m);
    }
    Json j = Json::parse(to_json(hists));
    const double mean = layer_mean_distance(acts, o.pair_cap, o.seed);
    j["layer_mean_distance"] = mean;
    Json peaks = Json::array();
    for (const auto& h : hists) peaks.push_back({{"class_label", h.class_label}, {"peak", h.peak_bin_center / mean}});
    j["normalized_peaks"] = std::move(peaks);
    emit(o.out, j.dump(2) + "\n", m);
  } else if (what == "inter-matrix") {
    const auto mat = inter_class_matrix(acts, o.pair_cap, o.seed);
    emit(sibling(o.out, ".csv"), matrix_csv(mat), m);
    Json j = Json::parse(to_json(mat));
    if (mat.classes.size() >= 3) j["correlation"] = Json::parse(to_json(inner_inter_correlation(mat)));
    emit(o.out, j.dump(2) + "\n", m);
  } else if (what == "radius") {
    Json j = Json::parse(to_json(class_radius_stats(acts)));
    for (auto& row : j["classes"]) {
      const int c = row["class_label"].get<int>();
      const bool pairs = acts.data.indices_of(c).size() >= 2;
      row["mean_inner_distance"] = pairs ? inner_class_histogram(acts, c, o.bins, o.pair_cap, o.seed).mean_distance : 0.0;
    }
    emit(o.out, j.dump(2) + "\n", m);
  } else {
    throw InputError("unknown analysis '" + what + "'");
  }
}

void run_classify_fit(const ClassifyOpts& o, RunManifest& m) {
  if (o.acts_train.size() != 1) throw InputError("classify fit takes exactly one --acts-train file");
  const auto train = load_input(o.acts_train.front(), m);
  const auto cfg = o.builder.config();
  m.set_seed(cfg.seed);
  save_model(fit_nearest_hull(train, cfg), o.out);
  m.add_output(o.out);
  m.add_output(o.out + ".avec");
}

void run_classify_eval(const ClassifyOpts& o, RunManifest& m) {
  if (o.acts_train.empty() || o.acts_train.size() != o.acts_test.size()) {
    throw InputError("classify eval needs one --acts-test file per --acts-train file");
  }
  if (o.loo != "vertex-sets" && o.loo != "rebuild") {
    throw InputError("unknown --loo mode '" + o.loo + "' (expected vertex-sets or rebuild)");
  }
  const auto cfg = o.builder.config();
  m.set_seed(cfg.seed);
  std::vector<LayerAccuracy> rows;
  for (Index i = 0; i < o.acts_train.size(); ++i) {
    const auto train = load_input(o.acts_train[i], m);
    const auto test = load_input(o.acts_test[i], m);
    const auto model = fit_nearest_hull(train, cfg);
    const auto loo = loo_train_accuracy(model, train, o.loo == "rebuild" ? LooMode::rebuild : LooMode::vertex_sets);
    rows.push_back({i + 1, loo.accuracy, accuracy(predict_all(model, test), test.labels)});
  }
  if (o.mlp_report.empty()) {
    std::ostringstream csv;
    csv << "layer,train_accuracy,test_accuracy,gap\n";
    for (const auto& r : rows) {
      csv << r.layer_index << ',' << num(r.train_accuracy) << ',' << num(r.test_accuracy) << ','
          << num(r.train_accuracy - r.test_accuracy) << '\n';
    }
    emit(o.out, csv.str(), m);
    return;
  }
  m.add_input(o.mlp_report);
  const auto report = gap_report(rows, train_report_from_json(read_text(o.mlp_report)));
  emit(o.out, gap_csv(report), m);
  emit(sibling(o.out, ".json"), to_json(report) + "\n", m);
}

void run_baseline(const std::string& method, const BaselineOpts& o, RunManifest& m) {
  const auto train = load_input(o.train, m);
  const auto test = load_input(o.test, m);
  m.set_seed(o.seed);
  BaselineResult r;
  if (method == "knn") {
    r = knn_baseline(train, test, o.k);
  } else if (method == "logreg") {
    LogRegConfig cfg;
    cfg.lr = o.lr;
    cfg.max_iters = o.iters;
    cfg.l2 = o.l2;
    cfg.tol = o.tol;
    cfg.seed = o.seed;
    r = logreg_baseline(train, test, cfg);
  } else {
    throw InputError("unknown baseline '" + method + "'");
  }
  if (o.out.size() >= 4 && o.out.compare(o.out.size() - 4, 4, ".csv") == 0) {
    emit(o.out, "method,train_accuracy,test_accuracy\n" + method + "," + num(r.train_accuracy) + "," +
                    num(r.test_accuracy) + "\n",
         m);
  } else {
    emit(o.out, to_json(r, method) + "\n", m);
  }
}

}  // namespace acthull::cli

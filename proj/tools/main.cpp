#include "commands.hpp"
#include "manifest.hpp"

#include "acthull/errors.hpp"
#include "acthull/parallel.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

namespace {

using acthull::cli::RunManifest;
using Json = nlohmann::ordered_json;

// Every option of `sub` with its effective value; defaults are recorded too.
Json snapshot(const CLI::App* sub) {
  Json j = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help") continue;
    const std::string name = opt->get_name().substr(opt->get_name().find_first_not_of('-'));
    const auto& given = opt->results();
    if (!given.empty()) {
      j[name] = given.size() == 1 ? Json(given.front()) : Json(given);
    } else if (!opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    } else {
      j[name] = nullptr;
    }
  }
  return j;
}

void add_solver(CLI::App* app, acthull::cli::SolverOpts& s) {
  app->add_option("--gap-tol", s.gap_tol, "Relative duality-gap tolerance of the distance QP");
  app->add_option("--zero-tol", s.zero_tol, "Distance-is-zero threshold as a fraction of the diameter");
}

void add_builder(CLI::App* app, acthull::cli::BuilderOpts& b) {
  app->add_option("--epsilon-rel", b.epsilon_rel, "Approximation tolerance as a fraction of the diameter");
  app->add_option("--init", b.init, "Startup selection")->check(CLI::IsMember({"seminmf", "directions"}));
  app->add_option("--init-count", b.init_count, "Startup budget k");
  app->add_option("--candidate-cap", b.candidate_cap, "Score only this many farthest candidates per step");
  app->add_option("--scoring", b.scoring, "Candidate scoring: bounded skips provably losing candidates")
      ->check(CLI::IsMember({"bounded", "exhaustive"}));
  app->add_option("--domain", b.domain, "Selection domain")->check(CLI::IsMember({"outside", "complement"}));
  app->add_option("--seminmf-iters", b.seminmf_iters, "Semi-NMF multiplicative update count");
  app->add_option("--seed", b.seed, "RNG seed");
  add_solver(app, b.solver);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate convex hulls and activation-space geometry"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: ACTHULL_THREADS or all cores)");

  std::string command;
  std::string primary;
  std::function<void(RunManifest&)> action;
  const CLI::App* chosen = nullptr;
  auto bind = [&](CLI::App* sub, std::string name, std::string& out, std::function<void(RunManifest&)> fn) {
    sub->callback([&, sub, name = std::move(name), fn = std::move(fn)] {
      command = name;
      primary = out;
      action = fn;
      chosen = sub;
    });
  };

  acthull::cli::GenToyOpts toy;
  auto* gen = app.add_subcommand("gen-toy", "Generate a 2D toy dataset");
  gen->add_option("--kind", toy.kind, "center, circles, moons or centers")
      ->check(CLI::IsMember({"center", "circles", "moons", "centers"}));
  gen->add_option("--n", toy.n, "Number of points");
  gen->add_option("--noise", toy.noise, "Gaussian jitter stddev");
  gen->add_option("--seed", toy.seed, "RNG seed");
  gen->add_option("--out", toy.out, "Output file (.csv or AVEC)")->required();
  gen->add_option("--svg", toy.svg, "Optional scatter plot");
  bind(gen, "gen-toy", toy.out, [&](RunManifest& m) { run_gen_toy(toy, m); });

  acthull::cli::ImportIdxOpts idx;
  auto* imp = app.add_subcommand("import-idx", "Convert an IDX image/label pair to a vector file");
  imp->add_option("--images", idx.images)->required()->check(CLI::ExistingFile);
  imp->add_option("--labels", idx.labels)->required()->check(CLI::ExistingFile);
  imp->add_option("--limit", idx.limit, "Keep only the first rows");
  imp->add_option("--out", idx.out)->required();
  bind(imp, "import-idx", idx.out, [&](RunManifest& m) { run_import_idx(idx, m); });

  auto* hull = app.add_subcommand("hull", "Approximate convex hulls");
  hull->require_subcommand(1);
  acthull::cli::HullBuildOpts hb;
  auto* build = hull->add_subcommand("build", "Build one hull");
  build->add_option("--input", hb.input)->required()->check(CLI::ExistingFile);
  build->add_option("--algo", hb.algo)->check(CLI::IsMember({"revised-ge", "ge", "kcha"}));
  add_builder(build, hb.builder);
  build->add_option("--out", hb.out, "Hull JSON")->required();
  build->add_option("--svg", hb.svg, "Scatter plot of the selection (2D only)");
  bind(build, "hull build", hb.out, [&](RunManifest& m) { run_hull_build(hb, m); });

  acthull::cli::HullBenchOpts bench;
  bench.builder.scoring = "exhaustive";
  auto* hbench = hull->add_subcommand("bench", "Compare builders on several datasets");
  hbench->add_option("--inputs", bench.inputs)->required()->check(CLI::ExistingFile);
  hbench->add_option("--algos", bench.algos)->delimiter(',')->check(CLI::IsMember({"revised-ge", "ge", "kcha"}));
  hbench->add_option("--repeats", bench.repeats, "Runs per cell; the fastest is reported");
  add_builder(hbench, bench.builder);
  hbench->add_option("--out", bench.out, "CSV table")->required();
  bind(hbench, "hull bench", bench.out, [&](RunManifest& m) { run_hull_bench(bench, m); });

  auto* mlp = app.add_subcommand("mlp", "Train networks and extract activations");
  mlp->require_subcommand(1);
  acthull::cli::MlpTrainOpts mt;
  auto* train = mlp->add_subcommand("train", "Train a fully connected ReLU network");
  train->add_option("--train", mt.train)->required()->check(CLI::ExistingFile);
  train->add_option("--test", mt.test)->check(CLI::ExistingFile);
  train->add_option("--widths", mt.widths, "Hidden layer widths")->delimiter(',');
  train->add_option("--epochs", mt.epochs);
  train->add_option("--lr", mt.lr);
  train->add_option("--batch", mt.batch);
  train->add_option("--seed", mt.seed);
  train->add_option("--out", mt.out, "Checkpoint path")->required();
  train->add_option("--report", mt.report, "Training report JSON (default: <out>.report.json)");
  bind(train, "mlp train", mt.out, [&](RunManifest& m) { run_mlp_train(mt, m); });

  acthull::cli::MlpExtractOpts me;
  auto* extract = mlp->add_subcommand("extract", "Write one layer's activation vectors");
  extract->add_option("--model", me.model)->required()->check(CLI::ExistingFile);
  extract->add_option("--data", me.data)->required()->check(CLI::ExistingFile);
  extract->add_option("--layer", me.layer)->required();
  extract->add_option("--split", me.split)->check(CLI::IsMember({"train", "test"}));
  extract->add_flag("--pre-activation", me.pre_activation, "Take the affine output before the ReLU");
  extract->add_option("--out", me.out)->required();
  bind(extract, "mlp extract", me.out, [&](RunManifest& m) { run_mlp_extract(me, m); });

  auto* analyze = app.add_subcommand("analyze", "Activation-space audits and statistics");
  analyze->require_subcommand(1);
  acthull::cli::AnalyzeOpts ao;
  for (const char* what : {"extreme", "inclusion", "inner-hist", "inter-matrix", "radius"}) {
    auto* sub = analyze->add_subcommand(what);
    sub->add_option("--acts", ao.acts, "Activation vectors")->required()->check(CLI::ExistingFile);
    sub->add_option("--layer", ao.layer, "Layer index recorded in the report");
    sub->add_option("--out", ao.out, "Report JSON")->required();
    const std::string w = what;
    if (w == "inclusion") sub->add_option("--model", ao.model, "Nearest-hull model from classify fit")->required();
    if (w == "extreme" || w == "inclusion") add_solver(sub, ao.solver);
    if (w == "inner-hist" || w == "radius") sub->add_option("--bins", ao.bins);
    if (w == "inner-hist" || w == "inter-matrix" || w == "radius") {
      sub->add_option("--pair-cap", ao.pair_cap, "Sample pairs beyond this count");
      sub->add_option("--seed", ao.seed);
    }
    bind(sub, "analyze " + w, ao.out, [&, w](RunManifest& m) { run_analyze(w, ao, m); });
  }

  auto* classify = app.add_subcommand("classify", "Nearest convex hull classification");
  classify->require_subcommand(1);
  acthull::cli::ClassifyOpts co;
  auto* fit = classify->add_subcommand("fit", "Build per-class hulls");
  fit->add_option("--acts-train", co.acts_train)->required()->check(CLI::ExistingFile);
  add_builder(fit, co.builder);
  fit->add_option("--out", co.out, "Model JSON (vertices go to <out>.avec)")->required();
  bind(fit, "classify fit", co.out, [&](RunManifest& m) { run_classify_fit(co, m); });
  auto* eval = classify->add_subcommand("eval", "Leave-one-out train and test accuracy per layer");
  eval->add_option("--acts-train", co.acts_train, "One file per layer")->required()->check(CLI::ExistingFile);
  eval->add_option("--acts-test", co.acts_test, "One file per layer")->required()->check(CLI::ExistingFile);
  eval->add_option("--mlp-report", co.mlp_report, "Training report for the gap comparison")
      ->check(CLI::ExistingFile);
  eval->add_option("--loo", co.loo)->check(CLI::IsMember({"vertex-sets", "rebuild"}));
  add_builder(eval, co.builder);
  eval->add_option("--out", co.out, "Per-layer accuracy CSV")->required();
  bind(eval, "classify eval", co.out, [&](RunManifest& m) { run_classify_eval(co, m); });

  auto* baseline = app.add_subcommand("baseline", "Classic classifiers on raw vectors");
  baseline->require_subcommand(1);
  acthull::cli::BaselineOpts bo;
  for (const char* method : {"knn", "logreg"}) {
    auto* sub = baseline->add_subcommand(method);
    sub->add_option("--train", bo.train)->required()->check(CLI::ExistingFile);
    sub->add_option("--test", bo.test)->required()->check(CLI::ExistingFile);
    sub->add_option("--out", bo.out, "Result JSON, or a CSV row when the name ends in .csv")->required();
    const std::string name = method;
    if (name == "knn") {
      sub->add_option("--k", bo.k);
    } else {
      sub->add_option("--lr", bo.lr);
      sub->add_option("--iters", bo.iters);
      sub->add_option("--l2", bo.l2);
      sub->add_option("--tol", bo.tol);
      sub->add_option("--seed", bo.seed);
    }
    bind(sub, "baseline " + name, bo.out, [&, name](RunManifest& m) { run_baseline(name, bo, m); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (!action) {
    std::cerr << app.help();
    return 2;
  }
  if (threads > 0) acthull::set_thread_count(threads);

  try {
    RunManifest manifest(command);
    Json config = snapshot(chosen);
    config["threads"] = acthull::thread_count();
    manifest.set_config(std::move(config));
    action(manifest);
    manifest.write(primary);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

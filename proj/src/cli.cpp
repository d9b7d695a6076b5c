#include "beliefnet/cli.hpp"

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "beliefnet/combination.hpp"
#include "beliefnet/evaluation.hpp"
#include "beliefnet/io.hpp"
#include "beliefnet/model.hpp"
#include "beliefnet/synth.hpp"

namespace beliefnet {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json load_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

struct SynthArgs {
  fs::path out;
  std::uint64_t seed = 1;
  int classes = 3;
  int tiles_per_class = 100;
  int tile_size = 64;
  int experts = 3;
  double error_rate = 0.1;
  double mixed_fraction = 0.1;
  std::vector<double> certainty = {0.6, 0.3, 0.1};
};

void run_synth(const SynthArgs& a, std::ostream& out) {
  if (a.certainty.size() != 3) throw std::invalid_argument("--certainty takes three probabilities");
  SynthConfig cfg;
  cfg.classes = preset_textures(a.classes);
  cfg.tiles_per_class = a.tiles_per_class;
  cfg.tile_size = a.tile_size;
  cfg.experts = preset_experts(a.experts, a.error_rate, {a.certainty[0], a.certainty[1], a.certainty[2]});
  cfg.mixed_fraction = a.mixed_fraction;
  cfg.seed = a.seed;
  const Corpus corpus = synth_corpus(cfg);
  write_corpus(corpus, a.out);
  out << "wrote " << corpus.tiles.size() << " tiles to " << a.out.string() << "\n";
}

struct FeaturesArgs {
  fs::path in, out;
  int levels = 16;
};

void run_features(const FeaturesArgs& a, std::ostream& out) {
  std::vector<FeatureVector> features;
  for (const auto& tile : read_tile_directory(a.in)) features.push_back(extract24(tile, a.levels));
  write_text(a.out, features_csv(features));
  out << "wrote " << features.size() << " feature vectors to " << a.out.string() << "\n";
}

struct RealityArgs {
  fs::path in, out, sidecar;
  std::string rule = "pcr";
  std::string decision = "betp";
  std::string compare;
  std::vector<std::string> candidates;
  bool shadow_as_ignorance = false;
  std::string shadow_label = "F";
};

void run_reality(const RealityArgs& a, std::ostream& out) {
  const AnnotationSet set = annotations_from_json(load_json(a.in));
  ReferenceOptions opts;
  opts.rule = parse_rule(a.rule);
  opts.criterion = parse_criterion(a.decision);
  if (!a.compare.empty()) opts.compare_with = parse_rule(a.compare);
  for (const auto& c : a.candidates) opts.candidates.push_back(set.frame.parse(c));
  opts.fusion.shadow_as_ignorance = a.shadow_as_ignorance;
  opts.fusion.shadow_label = a.shadow_label;
  if (a.shadow_as_ignorance && set.frame.find(a.shadow_label) < 0)
    throw std::invalid_argument("shadow class '" + a.shadow_label + "' is not in the frame");

  const ReferenceMap map = build_reference_map(set.tiles, set.frame, opts);
  write_text(a.out, reference_csv(map));
  const fs::path sidecar = a.sidecar.empty() ? fs::path(a.out).replace_extension(".json") : a.sidecar;
  write_text(sidecar, dump_json(reference_to_json(map)));
  out << "tiles=" << map.entries.size() << " mean_conflict=" << format_double(map.mean_conflict);
  if (map.disagreement_rate) out << " disagreement=" << format_double(*map.disagreement_rate);
  out << "\n";
}

struct FuseArgs {
  fs::path in, out, report;
  std::string rule = "pcr";
};

void run_fuse(const FuseArgs& a, std::ostream&) {
  const json j = load_json(a.in);
  if (!j.is_array()) throw FormatError(a.in.string() + ": expected an array of mass functions");
  std::vector<MassFunction> sources;
  for (const auto& item : j) sources.push_back(mass_from_json(item));
  for (std::size_t i = 0; i < sources.size(); ++i) {
    auto report = validate_mass(sources[i]);
    if (!report.ok()) throw std::invalid_argument("mass function " + std::to_string(i) + ": " + report.violations.front());
  }
  const MassFunction fused = combine(parse_rule(a.rule), sources);
  write_text(a.out, dump_json(mass_to_json(fused)));
  if (!a.report.empty()) {
    std::string csv = "metric,source,value\n";
    csv += "conflict,all," + format_double(conflict(sources)) + "\n";
    for (std::size_t i = 0; i < sources.size(); ++i)
      csv += "auto_conflict_3," + std::to_string(i) + "," + format_double(auto_conflict(sources[i], 3)) + "\n";
    write_text(a.report, csv);
  }
}

struct TrainArgs {
  fs::path features, targets, out, trace;
  std::vector<int> hidden = {30};
  double eta = 0.1;
  int epochs = 100;
  std::uint64_t seed = 1;
  double init_range = 0.5;
  double slope = 1.0;
  bool no_shuffle = false;
};

void run_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const auto features = parse_features_csv(read_text(a.features));
  const auto fused = fused_tiles_from_json(load_json(a.targets));
  if (features.empty()) throw std::invalid_argument("no feature rows in " + a.features.string());
  std::map<std::string, const MassFunction*> target_of;
  for (const auto& t : fused) target_of[t.id] = &t.mass;
  const Frame frame = fused.empty() ? Frame{} : fused.front().mass.frame();
  if (frame.size() < 2) throw std::invalid_argument("targets need a frame with at least two classes");

  std::vector<Eigen::VectorXd> rows;
  for (const auto& f : features) rows.push_back(f.values);
  const FeatureScaling scaling = FeatureScaling::fit(rows);

  std::vector<BeliefSample<double>> samples;
  std::size_t skipped = 0;
  for (const auto& f : features) {
    auto it = target_of.find(f.tile_id);
    if (it == target_of.end()) throw std::invalid_argument("no target bba for tile '" + f.tile_id + "'");
    try {
      samples.push_back(make_belief_sample(scaling.apply(f.values), *it->second));
    } catch (const UnusableSampleError&) {
      ++skipped;
    }
  }
  if (skipped) err << "skipped " << skipped << " tiles without singleton mass\n";
  if (samples.empty()) throw std::invalid_argument("no usable training sample");

  TrainConfig cfg;
  cfg.eta = a.eta;
  cfg.epochs = a.epochs;
  cfg.seed = a.seed;
  cfg.init_range = a.init_range;
  cfg.shuffle = !a.no_shuffle;
  cfg.validate();
  std::vector<int> sizes{kFeatureCount};
  sizes.insert(sizes.end(), a.hidden.begin(), a.hidden.end());
  sizes.push_back(static_cast<int>(frame.size()));
  Model model{init_network<double>(sizes, a.seed, a.init_range, a.slope), frame, scaling};
  const auto result = train<double>(model.network, samples, cfg);
  write_text(a.out, dump_json(model_to_json(model)));
  if (!a.trace.empty()) {
    std::string csv = "epoch,mean_error\n";
    for (std::size_t e = 0; e < result.epoch_error.size(); ++e)
      csv += std::to_string(e + 1) + "," + format_double(result.epoch_error[e]) + "\n";
    write_text(a.trace, csv);
  }
  out << "trained on " << samples.size() << " tiles, final mean error "
      << format_double(result.epoch_error.back()) << "\n";
}

struct ClassifyArgs {
  fs::path model, features, out;
  std::string decision = "betp";
};

void run_classify(const ClassifyArgs& a, std::ostream&) {
  const Model model = model_from_json(load_json(a.model));
  const auto criterion = parse_criterion(a.decision);
  std::string csv = "tile_id,label\n";
  for (const auto& f : parse_features_csv(read_text(a.features)))
    csv += f.tile_id + "," + model.classes.label(model.predict(f.values, criterion)) + "\n";
  write_text(a.out, csv);
}

struct EvalArgs {
  fs::path corpus, out;
  std::string rule = "pcr";
  std::string decision = "betp";
  int trials = 30;
  double split = 2.0 / 3.0;
  std::uint64_t seed = 1;
  std::vector<int> hidden = {30};
  double eta = 0.1;
  int epochs = 100;
  double init_range = 0.5;
  double slope = 1.0;
  int levels = 16;
};

void run_eval(const EvalArgs& a, std::ostream& out) {
  EvalConfig cfg;
  cfg.rule = parse_rule(a.rule);
  cfg.criterion = parse_criterion(a.decision);
  cfg.trials = a.trials;
  cfg.split = a.split;
  cfg.seed = a.seed;
  cfg.hidden = a.hidden;
  cfg.train.eta = a.eta;
  cfg.train.epochs = a.epochs;
  cfg.train.init_range = a.init_range;
  cfg.slope = a.slope;
  cfg.levels = a.levels;
  const EvalReport report = evaluate(read_corpus(a.corpus), cfg);
  const std::string csv = eval_report_csv(report);
  if (a.out.empty())
    out << csv;
  else
    write_text(a.out, csv);
  out << "mean=" << format_double(report.reference_summary.mean)
      << " truth_mean=" << format_double(report.truth_summary.mean) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expert fusion with belief functions and belief-trained MLP classification", "beliefnet"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic textured corpus with simulated expert annotations");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--seed", synth.seed);
  s->add_option("--classes", synth.classes, "Number of preset texture classes (1-7)");
  s->add_option("--tiles-per-class", synth.tiles_per_class);
  s->add_option("--tile-size", synth.tile_size);
  s->add_option("--experts", synth.experts);
  s->add_option("--error-rate", synth.error_rate);
  s->add_option("--mixed-fraction", synth.mixed_fraction);
  s->add_option("--certainty", synth.certainty, "Probabilities of sure, moderately sure, not sure")->expected(3);

  FeaturesArgs feats;
  auto* f = app.add_subcommand("features", "Extract 24 co-occurrence features from a directory of PGM tiles");
  f->add_option("--in", feats.in, "Directory of .pgm tiles")->required();
  f->add_option("--out", feats.out, "Features CSV")->required();
  f->add_option("--levels", feats.levels, "Gray-level quantization")->check(CLI::Range(2, 256));

  RealityArgs reality;
  auto* r = app.add_subcommand("reality", "Fuse expert annotations per tile and decide a reference label");
  r->add_option("--in", reality.in, "Annotation JSON")->required();
  r->add_option("--out", reality.out, "Reference CSV")->required();
  r->add_option("--bba-out", reality.sidecar, "Fused bba JSON (default: --out with .json)");
  r->add_option("--rule", reality.rule, "conjunctive | dp | pcr");
  r->add_option("--decision", reality.decision, "betp | bel | pl");
  r->add_option("--compare", reality.compare, "Second rule for the decision-disagreement rate");
  r->add_option("--candidates", reality.candidates, "Decision candidates such as A B A|B");
  r->add_flag("--shadow-as-ignorance", reality.shadow_as_ignorance);
  r->add_option("--shadow-label", reality.shadow_label);

  FuseArgs fuse;
  auto* u = app.add_subcommand("fuse", "Combine mass functions");
  u->add_option("--in", fuse.in, "JSON array of mass functions")->required();
  u->add_option("--out", fuse.out, "Fused mass function JSON")->required();
  u->add_option("--rule", fuse.rule, "conjunctive | dp | pcr")->required();
  u->add_option("--report", fuse.report, "CSV with conflict and order-3 auto-conflicts");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a belief MLP on features and fused targets");
  t->add_option("--features", tr.features)->required();
  t->add_option("--targets", tr.targets, "Fused bba JSON written by reality")->required();
  t->add_option("--out", tr.out, "Model JSON")->required();
  t->add_option("--hidden", tr.hidden, "Hidden layer sizes");
  t->add_option("--eta", tr.eta);
  t->add_option("--epochs", tr.epochs);
  t->add_option("--seed", tr.seed);
  t->add_option("--init-range", tr.init_range);
  t->add_option("--slope", tr.slope);
  t->add_flag("--no-shuffle", tr.no_shuffle);
  t->add_option("--trace", tr.trace, "Per-epoch error CSV");

  ClassifyArgs cl;
  auto* c = app.add_subcommand("classify", "Classify feature rows with a trained model");
  c->add_option("--model", cl.model)->required();
  c->add_option("--features", cl.features)->required();
  c->add_option("--out", cl.out)->required();
  c->add_option("--decision", cl.decision, "betp | bel | pl");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Repeated random-split evaluation on a corpus written by synth");
  e->add_option("--corpus", ev.corpus)->required();
  e->add_option("--out", ev.out, "Report CSV (default: stdout)");
  e->add_option("--rule", ev.rule);
  e->add_option("--decision", ev.decision);
  e->add_option("--trials", ev.trials);
  e->add_option("--split", ev.split);
  e->add_option("--seed", ev.seed);
  e->add_option("--hidden", ev.hidden);
  e->add_option("--eta", ev.eta);
  e->add_option("--epochs", ev.epochs);
  e->add_option("--init-range", ev.init_range);
  e->add_option("--slope", ev.slope);
  e->add_option("--levels", ev.levels)->check(CLI::Range(2, 256));

  if (argc <= 1) {
    err << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*s) run_synth(synth, out);
    else if (*f) run_features(feats, out);
    else if (*r) run_reality(reality, out);
    else if (*u) run_fuse(fuse, out);
    else if (*t) run_train(tr, out, err);
    else if (*c) run_classify(cl, out);
    else if (*e) run_eval(ev, out);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace beliefnet

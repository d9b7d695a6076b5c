#include "beliefnet/evaluation.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "beliefnet/io.hpp"

namespace beliefnet {

RateSummary summarize_rates(std::span<const double> rates) {
  if (rates.empty()) throw std::invalid_argument("no rates to summarize");
  const double n = static_cast<double>(rates.size());
  RateSummary s;
  s.mean = std::accumulate(rates.begin(), rates.end(), 0.0) / n;
  double half = 0.0;
  if (rates.size() > 1) {
    double ss = 0.0;
    for (double r : rates) ss += (r - s.mean) * (r - s.mean);
    half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

void EvalConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("evaluation needs at least one trial");
  if (!(split > 0.0 && split < 1.0)) throw std::invalid_argument("split must lie strictly between 0 and 1");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("hidden layer sizes must be positive");
  train.validate();
}

namespace {

std::uint64_t trial_seed(std::uint64_t seed, int trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

EvalReport evaluate(const Corpus& corpus, const EvalConfig& cfg) {
  cfg.validate();
  const std::size_t n = corpus.tiles.size();
  if (corpus.annotations.size() != n || corpus.truth.size() != n)
    throw std::invalid_argument("corpus tiles, annotations and truth labels differ in count");
  const auto n_train = static_cast<std::size_t>(std::llround(cfg.split * static_cast<double>(n)));
  if (n < 2 || n_train < 1 || n_train >= n) throw std::invalid_argument("too few tiles to split");
  const Frame& frame = corpus.frame;
  if (frame.size() < 2) throw std::invalid_argument("evaluation needs at least two classes");

  ReferenceOptions ref_opts;
  ref_opts.rule = cfg.rule;
  ref_opts.criterion = cfg.criterion;
  ref_opts.fusion = cfg.fusion;
  const ReferenceMap reference = build_reference_map(corpus.annotations, frame, ref_opts);

  std::vector<Eigen::VectorXd> features;
  std::vector<std::size_t> ref_label, truth_label;
  features.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (reference.entries[i].tile_id != corpus.tiles[i].id)
      throw std::invalid_argument("annotation order does not match tile '" + corpus.tiles[i].id + "'");
    features.push_back(extract24(corpus.tiles[i], cfg.levels).values);
    const FocalSet decision = reference.entries[i].decision;
    if (!decision.is_singleton()) throw std::invalid_argument("evaluation needs singleton reference decisions");
    ref_label.push_back(static_cast<std::size_t>(std::countr_zero(decision.bits)));
    truth_label.push_back(frame.index_of(corpus.truth[i]));
  }

  std::vector<int> sizes{kFeatureCount};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(static_cast<int>(frame.size()));

  EvalReport report;
  report.config = cfg;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 split_gen(trial_seed(cfg.seed, trial, 0));
    std::shuffle(order.begin(), order.end(), split_gen);
    const std::span<const std::size_t> train_idx(order.data(), n_train);
    const std::span<const std::size_t> test_idx(order.data() + n_train, n - n_train);

    std::vector<Eigen::VectorXd> train_rows;
    for (std::size_t i : train_idx) train_rows.push_back(features[i]);
    const FeatureScaling scaling = FeatureScaling::fit(train_rows);

    std::vector<BeliefSample<double>> samples;
    std::size_t skipped = 0;
    for (std::size_t i : train_idx) {
      try {
        samples.push_back(make_belief_sample(scaling.apply(features[i]), reference.entries[i].fused));
      } catch (const UnusableSampleError&) {
        ++skipped;
      }
    }
    if (samples.empty()) throw std::runtime_error("no usable training sample in trial " + std::to_string(trial + 1));

    TrainConfig tc = cfg.train;
    tc.seed = trial_seed(cfg.seed, trial, 1);
    auto net = init_network<double>(sizes, trial_seed(cfg.seed, trial, 2), cfg.train.init_range, cfg.slope);
    train<double>(net, samples, tc);

    std::vector<std::size_t> predicted, ref, truth;
    for (std::size_t i : test_idx) {
      predicted.push_back(classify(net, scaling.apply(features[i]), DecisionCriterion::max_betp, frame));
      ref.push_back(ref_label[i]);
      truth.push_back(truth_label[i]);
    }
    report.rates.push_back(good_classification_rate<std::size_t>(predicted, ref));
    report.truth_rates.push_back(good_classification_rate<std::size_t>(predicted, truth));
    report.skipped.push_back(skipped);
  }
  report.reference_summary = summarize_rates(report.rates);
  report.truth_summary = summarize_rates(report.truth_rates);
  return report;
}

std::string eval_report_csv(const EvalReport& r) {
  const auto& c = r.config;
  std::string out = "# rule=" + std::string(to_string(c.rule)) + " criterion=" + std::string(to_string(c.criterion)) +
                    " split=" + format_double(c.split) + " trials=" + std::to_string(c.trials) +
                    " seed=" + std::to_string(c.seed) + " eta=" + format_double(c.train.eta) +
                    " epochs=" + std::to_string(c.train.epochs) + " hidden=";
  for (std::size_t i = 0; i < c.hidden.size(); ++i) out += (i ? "x" : "") + std::to_string(c.hidden[i]);
  out += " levels=" + std::to_string(c.levels) + " interval=" + EvalReport::kIntervalMethod + "\n";
  out += "trial,rate,truth_rate\n";
  for (std::size_t t = 0; t < r.rates.size(); ++t)
    out += std::to_string(t + 1) + "," + format_double(r.rates[t]) + "," + format_double(r.truth_rates[t]) + "\n";
  out += "summary,mean,ci_low,ci_high,trials\n";
  const auto line = [&](const char* name, const RateSummary& s) {
    out += std::string(name) + "," + format_double(s.mean) + "," + format_double(s.ci_low) + "," +
           format_double(s.ci_high) + "," + std::to_string(r.rates.size()) + "\n";
  };
  line("reference", r.reference_summary);
  line("truth", r.truth_summary);
  return out;
}

}  // namespace beliefnet

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beliefnet/expert_fusion.hpp"
#include "beliefnet/mlp.hpp"
#include "beliefnet/synth.hpp"

namespace beliefnet {

/// Fraction of positions where the two label vectors agree.
template <typename T>
double good_classification_rate(std::span<const T> predicted, std::span<const T> reference) {
  if (predicted.size() != reference.size()) throw std::invalid_argument("label vectors differ in length");
  if (predicted.empty()) throw std::invalid_argument("cannot score an empty label vector");
  std::size_t good = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == reference[i]) ++good;
  return static_cast<double>(good) / static_cast<double>(predicted.size());
}

struct RateSummary {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Mean with a normal-approximation 95% interval, mean +- 1.96 sd / sqrt(n).
RateSummary summarize_rates(std::span<const double> rates);

struct EvalConfig {
  CombinationRule rule = CombinationRule::pcr;
  DecisionCriterion criterion = DecisionCriterion::max_betp;
  FusionOptions fusion;
  std::vector<int> hidden = {30};
  double slope = 1.0;
  TrainConfig train;
  int trials = 30;
  double split = 2.0 / 3.0;
  int levels = 16;
  std::uint64_t seed = 1;

  void validate() const;
};

struct EvalReport {
  EvalConfig config;
  /// Per-trial rate against the fused expert reference.
  std::vector<double> rates;
  /// Per-trial rate against the synthetic ground truth.
  std::vector<double> truth_rates;
  RateSummary reference_summary;
  RateSummary truth_summary;
  /// Training tiles dropped per trial because their bba had no singleton mass.
  std::vector<std::size_t> skipped;
  static constexpr const char* kIntervalMethod = "normal-approximation-95";
};

/// Repeated random train/test splits: fuse experts into a reference, train the
/// belief MLP on the training part, score the test part.
EvalReport evaluate(const Corpus& corpus, const EvalConfig& cfg);

/// "# ..." echo line, "trial,rate,truth_rate" rows, then a summary block.
std::string eval_report_csv(const EvalReport& report);

}  // namespace beliefnet

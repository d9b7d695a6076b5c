#pragma once

#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beliefnet/frame.hpp"

namespace beliefnet {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kPruneThreshold = 1e-12;

/// Basic belief assignment on the power set of a frame, stored sparsely.
///
/// Exact zeros are never stored. Mass on the empty set is allowed (open
/// world). The constructor does not enforce normalization so malformed input
/// can still be diagnosed with validate_mass().
class MassFunction {
 public:
  using Storage = std::map<FocalSet, double>;

  MassFunction() = default;
  explicit MassFunction(Frame frame) : frame_(std::move(frame)) {}
  /// Repeated focal sets are summed. Throws if a set does not belong to the frame.
  MassFunction(Frame frame, std::span<const std::pair<FocalSet, double>> entries);
  MassFunction(Frame frame, std::initializer_list<std::pair<FocalSet, double>> entries)
      : MassFunction(std::move(frame), std::span<const std::pair<FocalSet, double>>(entries.begin(), entries.size())) {}

  /// Convenience form keyed by "A|B" strings.
  static MassFunction from_labels(Frame frame, std::initializer_list<std::pair<std::string_view, double>> entries);

  const Frame& frame() const { return frame_; }
  const Storage& focal_elements() const { return masses_; }
  std::size_t focal_count() const { return masses_.size(); }

  double mass(FocalSet s) const;
  double mass(std::string_view subset) const { return mass(frame_.parse(subset)); }
  double empty_mass() const { return mass(FocalSet::empty()); }
  double total() const;

  /// Drops entries with |mass| < threshold and rescales the rest to sum 1.
  MassFunction pruned(double threshold = kPruneThreshold) const;

  friend bool operator==(const MassFunction& a, const MassFunction& b) {
    return a.frame_ == b.frame_ && a.masses_ == b.masses_;
  }

 private:
  Frame frame_;
  Storage masses_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_mass(const MassFunction& m);

/// Sum of m(Y) over non-empty Y included in x.
double credibility(const MassFunction& m, FocalSet x);
/// Sum of m(Y) over Y meeting x.
double plausibility(const MassFunction& m, FocalSet x);
/// Pignistic probability of x. Throws for x = {} or total conflict.
double pignistic(const MassFunction& m, FocalSet x);

enum class DecisionCriterion { max_betp, max_bel, max_pl };

DecisionCriterion parse_criterion(std::string_view name);
std::string_view to_string(DecisionCriterion c);

double criterion_value(const MassFunction& m, DecisionCriterion c, FocalSet x);

/// Candidate with the largest criterion value; ties go to the lowest subset code.
FocalSet decide(const MassFunction& m, DecisionCriterion c, std::span<const FocalSet> candidates);
/// decide() over the singletons of m's frame.
FocalSet decide(const MassFunction& m, DecisionCriterion c);

MassFunction vacuous(const Frame& frame);
MassFunction categorical(const Frame& frame, FocalSet s);

}  // namespace beliefnet

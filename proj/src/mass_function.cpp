#include "beliefnet/mass_function.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace beliefnet {

namespace {

void require_owned(const MassFunction& m, FocalSet x) {
  if (!m.frame().owns(x))
    throw std::invalid_argument("subset code " + std::to_string(x.bits) + " does not belong to the frame");
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

MassFunction::MassFunction(Frame frame, std::span<const std::pair<FocalSet, double>> entries)
    : frame_(std::move(frame)) {
  for (const auto& [set, value] : entries) {
    if (!frame_.owns(set))
      throw std::invalid_argument("subset code " + std::to_string(set.bits) + " does not belong to the frame");
    masses_[set] += value;
  }
  std::erase_if(masses_, [](const auto& kv) { return kv.second == 0.0; });
}

MassFunction MassFunction::from_labels(Frame frame,
                                       std::initializer_list<std::pair<std::string_view, double>> entries) {
  std::vector<std::pair<FocalSet, double>> coded;
  for (const auto& [text, value] : entries) coded.emplace_back(frame.parse(text), value);
  return MassFunction(std::move(frame), coded);
}

double MassFunction::mass(FocalSet s) const {
  auto it = masses_.find(s);
  return it == masses_.end() ? 0.0 : it->second;
}

double MassFunction::total() const {
  double sum = 0.0;
  for (const auto& [set, value] : masses_) sum += value;
  return sum;
}

MassFunction MassFunction::pruned(double threshold) const {
  MassFunction out(frame_);
  double kept = 0.0;
  for (const auto& [set, value] : masses_) {
    if (std::abs(value) < threshold) continue;
    out.masses_.emplace(set, value);
    kept += value;
  }
  if (kept > 0.0)
    for (auto& [set, value] : out.masses_) value /= kept;
  return out;
}

ValidationReport validate_mass(const MassFunction& m) {
  ValidationReport report;
  if (m.frame().size() == 0) {
    report.violations.push_back("frame is empty");
    return report;
  }
  for (const auto& [set, value] : m.focal_elements()) {
    const std::string name = m.frame().owns(set) ? m.frame().format(set) : std::to_string(set.bits);
    if (!std::isfinite(value))
      report.violations.push_back("mass(" + name + ")=" + num(value) + " is not finite");
    else if (value <= 0.0)
      report.violations.push_back("mass(" + name + ")=" + num(value) + " is not positive");
    else if (value > 1.0 + kMassTolerance)
      report.violations.push_back("mass(" + name + ")=" + num(value) + " exceeds 1");
  }
  const double sum = m.total();
  if (!(std::abs(sum - 1.0) <= kMassTolerance)) report.violations.push_back("sum=" + num(sum));
  return report;
}

double credibility(const MassFunction& m, FocalSet x) {
  require_owned(m, x);
  double sum = 0.0;
  for (const auto& [y, value] : m.focal_elements())
    if (!y.is_empty() && y.is_subset_of(x)) sum += value;
  return sum;
}

double plausibility(const MassFunction& m, FocalSet x) {
  require_owned(m, x);
  double sum = 0.0;
  for (const auto& [y, value] : m.focal_elements())
    if (!(y & x).is_empty()) sum += value;
  return sum;
}

double pignistic(const MassFunction& m, FocalSet x) {
  require_owned(m, x);
  if (x.is_empty()) throw std::invalid_argument("pignistic probability is undefined on the empty set");
  const double normalizer = 1.0 - m.empty_mass();
  if (normalizer <= 0.0) throw std::domain_error("pignistic probability is undefined under total conflict");
  double sum = 0.0;
  for (const auto& [y, value] : m.focal_elements()) {
    if (y.is_empty()) continue;
    sum += static_cast<double>((x & y).cardinality()) / y.cardinality() * value;
  }
  return sum / normalizer;
}

DecisionCriterion parse_criterion(std::string_view name) {
  if (name == "betp" || name == "max-betp") return DecisionCriterion::max_betp;
  if (name == "bel" || name == "max-bel") return DecisionCriterion::max_bel;
  if (name == "pl" || name == "max-pl") return DecisionCriterion::max_pl;
  throw std::invalid_argument("unknown decision criterion '" + std::string(name) + "'");
}

std::string_view to_string(DecisionCriterion c) {
  switch (c) {
    case DecisionCriterion::max_betp: return "betp";
    case DecisionCriterion::max_bel: return "bel";
    case DecisionCriterion::max_pl: return "pl";
  }
  return "?";
}

double criterion_value(const MassFunction& m, DecisionCriterion c, FocalSet x) {
  switch (c) {
    case DecisionCriterion::max_betp: return pignistic(m, x);
    case DecisionCriterion::max_bel: return credibility(m, x);
    case DecisionCriterion::max_pl: return plausibility(m, x);
  }
  throw std::logic_error("unhandled decision criterion");
}

FocalSet decide(const MassFunction& m, DecisionCriterion c, std::span<const FocalSet> candidates) {
  if (candidates.empty()) throw std::invalid_argument("decision needs at least one candidate");
  bool have = false;
  FocalSet best;
  double best_value = 0.0;
  for (FocalSet x : candidates) {
    if (x.is_empty()) throw std::invalid_argument("the empty set is not a decision candidate");
    const double v = criterion_value(m, c, x);
    if (!have || v > best_value || (v == best_value && x < best)) {
      best = x;
      best_value = v;
      have = true;
    }
  }
  return best;
}

FocalSet decide(const MassFunction& m, DecisionCriterion c) {
  const auto candidates = m.frame().singletons();
  return decide(m, c, candidates);
}

MassFunction vacuous(const Frame& frame) { return MassFunction(frame, {{frame.full(), 1.0}}); }

MassFunction categorical(const Frame& frame, FocalSet s) { return MassFunction(frame, {{s, 1.0}}); }

}  // namespace beliefnet

#include "beliefnet/combination.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace beliefnet {

namespace {

using FocalList = std::vector<std::pair<FocalSet, double>>;

struct Tuple {
  FocalSet intersection;
  FocalSet union_;
  double product;
  std::span<const FocalSet> sets;
  std::span<const double> masses;
};

/// Depth-first walk over every tuple of focal elements, one per source.
class TupleWalker {
 public:
  explicit TupleWalker(std::span<const MassFunction> sources) {
    lists_.reserve(sources.size());
    for (const auto& m : sources) lists_.emplace_back(m.focal_elements().begin(), m.focal_elements().end());
    sets_.resize(sources.size());
    masses_.resize(sources.size());
  }

  template <typename Visit>
  void run(const FocalSet full, Visit&& visit) {
    descend(0, full, FocalSet::empty(), 1.0, visit);
  }

 private:
  template <typename Visit>
  void descend(std::size_t depth, FocalSet inter, FocalSet uni, double product, Visit& visit) {
    if (depth == lists_.size()) {
      visit(Tuple{inter, uni, product, sets_, masses_});
      return;
    }
    for (const auto& [set, value] : lists_[depth]) {
      const double p = product * value;
      if (p == 0.0) continue;
      sets_[depth] = set;
      masses_[depth] = value;
      descend(depth + 1, inter & set, uni | set, p, visit);
    }
  }

  std::vector<FocalList> lists_;
  std::vector<FocalSet> sets_;
  std::vector<double> masses_;
};

void check_sources(std::span<const MassFunction> sources, bool forbid_empty_mass) {
  if (sources.size() < 2)
    throw std::invalid_argument("combination needs at least two sources, got " + std::to_string(sources.size()));
  const Frame& frame = sources.front().frame();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& m = sources[i];
    if (!(m.frame() == frame)) throw std::invalid_argument("source " + std::to_string(i) + " uses a different frame");
    auto report = validate_mass(m);
    if (!report.ok())
      throw std::invalid_argument("source " + std::to_string(i) + " is not a valid bba: " + report.violations.front());
    if (forbid_empty_mass && m.empty_mass() > 0.0)
      throw std::invalid_argument("source " + std::to_string(i) + " assigns mass to the empty set");
  }
}

MassFunction finish(const Frame& frame, const std::map<FocalSet, double>& acc) {
  std::vector<std::pair<FocalSet, double>> entries(acc.begin(), acc.end());
  return MassFunction(frame, entries).pruned();
}

}  // namespace

CombinationRule parse_rule(std::string_view name) {
  if (name == "conjunctive") return CombinationRule::conjunctive;
  if (name == "dp" || name == "dubois_prade" || name == "dubois-prade") return CombinationRule::dubois_prade;
  if (name == "pcr") return CombinationRule::pcr;
  throw std::invalid_argument("unknown combination rule '" + std::string(name) + "'");
}

std::string_view to_string(CombinationRule rule) {
  switch (rule) {
    case CombinationRule::conjunctive: return "conjunctive";
    case CombinationRule::dubois_prade: return "dp";
    case CombinationRule::pcr: return "pcr";
  }
  return "?";
}

MassFunction conjunctive_combine(std::span<const MassFunction> sources) {
  check_sources(sources, false);
  const Frame& frame = sources.front().frame();
  std::map<FocalSet, double> acc;
  TupleWalker(sources).run(frame.full(), [&](const Tuple& t) { acc[t.intersection] += t.product; });
  return finish(frame, acc);
}

MassFunction dubois_prade_combine(std::span<const MassFunction> sources) {
  check_sources(sources, true);
  const Frame& frame = sources.front().frame();
  std::map<FocalSet, double> acc;
  TupleWalker(sources).run(frame.full(), [&](const Tuple& t) {
    acc[t.intersection.is_empty() ? t.union_ : t.intersection] += t.product;
  });
  return finish(frame, acc);
}

MassFunction pcr_combine(std::span<const MassFunction> sources) {
  check_sources(sources, true);
  const Frame& frame = sources.front().frame();
  std::map<FocalSet, double> acc;
  TupleWalker(sources).run(frame.full(), [&](const Tuple& t) {
    if (!t.intersection.is_empty()) {
      acc[t.intersection] += t.product;
      return;
    }
    double denominator = 0.0;
    for (double v : t.masses) denominator += v;
    if (denominator == 0.0) return;
    for (std::size_t i = 0; i < t.sets.size(); ++i) acc[t.sets[i]] += t.masses[i] * t.product / denominator;
  });
  return finish(frame, acc);
}

MassFunction combine(CombinationRule rule, std::span<const MassFunction> sources) {
  switch (rule) {
    case CombinationRule::conjunctive: return conjunctive_combine(sources);
    case CombinationRule::dubois_prade: return dubois_prade_combine(sources);
    case CombinationRule::pcr: return pcr_combine(sources);
  }
  throw std::logic_error("unhandled combination rule");
}

double conflict(std::span<const MassFunction> sources) { return conjunctive_combine(sources).empty_mass(); }

double auto_conflict(const MassFunction& m, int order) {
  if (order < 2) throw std::invalid_argument("auto-conflict order must be at least 2");
  std::vector<MassFunction> copies(static_cast<std::size_t>(order), m);
  return conflict(copies);
}

}  // namespace beliefnet

#include "beliefnet/expert_fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace beliefnet {

Certainty parse_certainty(std::string_view name) {
  if (name == "sure") return Certainty::sure;
  if (name == "moderately_sure" || name == "moderately-sure" || name == "moderate") return Certainty::moderately_sure;
  if (name == "not_sure" || name == "not-sure") return Certainty::not_sure;
  throw std::invalid_argument("unknown certainty level '" + std::string(name) + "'");
}

std::string_view to_string(Certainty c) {
  switch (c) {
    case Certainty::sure: return "sure";
    case Certainty::moderately_sure: return "moderately_sure";
    case Certainty::not_sure: return "not_sure";
  }
  return "?";
}

double CertaintyWeights::operator()(Certainty c) const {
  switch (c) {
    case Certainty::sure: return sure;
    case Certainty::moderately_sure: return moderately_sure;
    case Certainty::not_sure: return not_sure;
  }
  return 0.0;
}

void CertaintyWeights::validate() const {
  for (double w : {sure, moderately_sure, not_sure})
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("certainty weights must lie in [0,1]");
  if (!(sure > moderately_sure && moderately_sure > not_sure))
    throw std::invalid_argument("certainty weights must strictly decrease from sure to not_sure");
}

MassFunction annotation_to_mass(const TileAnnotation& annotation, const Frame& frame, const FusionOptions& options) {
  std::vector<double> class_mass(frame.size(), 0.0);
  double proportion_sum = 0.0;
  for (const auto& e : annotation.entries) {
    const std::size_t index = frame.index_of(e.label);
    if (!(e.proportion >= 0.0 && e.proportion <= 1.0))
      throw std::invalid_argument("proportion for '" + e.label + "' must lie in [0,1]");
    proportion_sum += e.proportion;
    if (options.shadow_as_ignorance && e.label == options.shadow_label) continue;
    class_mass[index] += e.proportion * options.weights(e.certainty);
  }
  if (proportion_sum > 1.0 + kMassTolerance)
    throw std::invalid_argument("proportions of expert '" + annotation.expert_id + "' sum to " +
                                std::to_string(proportion_sum) + " > 1");

  double assigned = 0.0;
  std::vector<std::pair<FocalSet, double>> entries;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (class_mass[i] <= 0.0) continue;
    entries.emplace_back(FocalSet::singleton(i), class_mass[i]);
    assigned += class_mass[i];
  }
  double ignorance = 1.0 - assigned;
  if (ignorance < -kMassTolerance)
    throw std::invalid_argument("certainties and proportions of expert '" + annotation.expert_id +
                                "' leave negative mass on the frame");
  if (ignorance > 0.0) entries.emplace_back(frame.full(), ignorance);
  return MassFunction(frame, entries);
}

MassFunction fuse_tile(std::span<const TileAnnotation> annotations, CombinationRule rule, const Frame& frame,
                       const FusionOptions& options) {
  if (annotations.empty()) throw std::invalid_argument("a tile needs at least one annotation");
  std::vector<MassFunction> masses;
  masses.reserve(annotations.size());
  for (const auto& a : annotations) masses.push_back(annotation_to_mass(a, frame, options));
  if (masses.size() == 1) return masses.front();
  return combine(rule, masses);
}

ReferenceMap build_reference_map(std::span<const AnnotatedTile> tiles, const Frame& frame,
                                 const ReferenceOptions& options) {
  options.fusion.weights.validate();
  ReferenceMap out;
  out.frame = frame;
  out.rule = options.rule;
  out.criterion = options.criterion;
  out.compared_rule = options.compare_with;
  const std::vector<FocalSet> candidates = options.candidates.empty() ? frame.singletons() : options.candidates;

  double conflict_sum = 0.0;
  std::size_t disagreements = 0;
  out.entries.reserve(tiles.size());
  for (const auto& tile : tiles) {
    if (tile.experts.empty()) throw std::invalid_argument("tile '" + tile.id + "' has no annotation");
    std::vector<MassFunction> masses;
    for (const auto& a : tile.experts) masses.push_back(annotation_to_mass(a, frame, options.fusion));

    ReferenceEntry entry;
    entry.tile_id = tile.id;
    entry.fused = masses.size() == 1 ? masses.front() : combine(options.rule, masses);
    entry.conflict = masses.size() == 1 ? masses.front().empty_mass() : conflict(masses);
    entry.decision = decide(entry.fused, options.criterion, candidates);
    if (options.compare_with) {
      const MassFunction other = masses.size() == 1 ? masses.front() : combine(*options.compare_with, masses);
      entry.compared_decision = decide(other, options.criterion, candidates);
      if (*entry.compared_decision != entry.decision) ++disagreements;
    }
    conflict_sum += entry.conflict;
    out.entries.push_back(std::move(entry));
  }
  if (!tiles.empty()) out.mean_conflict = conflict_sum / static_cast<double>(tiles.size());
  if (options.compare_with)
    out.disagreement_rate = tiles.empty() ? 0.0 : static_cast<double>(disagreements) / static_cast<double>(tiles.size());
  return out;
}

double decision_disagreement(const ReferenceMap& a, const ReferenceMap& b) {
  if (a.entries.size() != b.entries.size()) throw std::invalid_argument("reference maps cover different tiles");
  if (a.entries.empty()) return 0.0;
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].tile_id != b.entries[i].tile_id) throw std::invalid_argument("reference maps cover different tiles");
    if (a.entries[i].decision != b.entries[i].decision) ++differ;
  }
  return static_cast<double>(differ) / static_cast<double>(a.entries.size());
}

MassFunction merge_classes(const MassFunction& m, const std::map<std::string, std::string>& mapping,
                           const Frame& target) {
  const Frame& source = m.frame();
  for (const auto& [from, to] : mapping) {
    if (source.find(from) < 0) throw std::invalid_argument("mapping references unknown class '" + from + "'");
    if (target.parse(to).is_empty()) throw std::invalid_argument("class '" + from + "' maps to the empty set");
  }
  std::vector<FocalSet> image(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    auto it = mapping.find(source.label(i));
    image[i] = it != mapping.end() ? target.parse(it->second) : target.singleton(source.label(i));
  }
  std::vector<std::pair<FocalSet, double>> entries;
  for (const auto& [set, value] : m.focal_elements()) {
    FocalSet rewritten;
    for (std::size_t i = 0; i < source.size(); ++i)
      if (set.contains(i)) rewritten = rewritten | image[i];
    entries.emplace_back(rewritten, value);
  }
  return MassFunction(target, entries);
}

MassFunction merge_classes(const MassFunction& m, const std::map<std::string, std::string>& mapping) {
  return merge_classes(m, mapping, m.frame());
}

std::vector<AnnotationEntry> proportions_from_pixels(std::span<const PixelLabel> pixels) {
  if (pixels.empty()) return {};
  std::map<std::pair<std::string, Certainty>, double> counts;
  for (const auto& px : pixels) {
    if (px.boundary_with) {
      counts[{px.label, px.certainty}] += 0.5;
      counts[{*px.boundary_with, px.certainty}] += 0.5;
    } else {
      counts[{px.label, px.certainty}] += 1.0;
    }
  }
  std::vector<AnnotationEntry> out;
  const double n = static_cast<double>(pixels.size());
  for (const auto& [key, count] : counts) out.push_back({key.first, key.second, count / n});
  return out;
}

}  // namespace beliefnet

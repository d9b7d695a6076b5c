#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beliefnet/combination.hpp"
#include "beliefnet/mass_function.hpp"

namespace beliefnet {

enum class Certainty { sure, moderately_sure, not_sure };

Certainty parse_certainty(std::string_view name);
std::string_view to_string(Certainty c);

/// Weight attached to each certainty level; defaults are 2/3, 1/2 and 1/3.
struct CertaintyWeights {
  double sure = 2.0 / 3.0;
  double moderately_sure = 0.5;
  double not_sure = 1.0 / 3.0;

  double operator()(Certainty c) const;
  /// Throws unless every weight is in [0,1] and sure > moderately_sure > not_sure.
  void validate() const;
};

struct AnnotationEntry {
  std::string label;
  Certainty certainty = Certainty::sure;
  double proportion = 0.0;
};

/// One expert's reading of one tile.
struct TileAnnotation {
  std::string expert_id;
  std::vector<AnnotationEntry> entries;
};

struct FusionOptions {
  CertaintyWeights weights;
  /// When set, entries for `shadow_label` leave their mass on the whole frame.
  bool shadow_as_ignorance = false;
  std::string shadow_label = "F";
};

/// m(C) = sum_k p_{C,k} c_k per class, remainder on the whole frame.
MassFunction annotation_to_mass(const TileAnnotation& annotation, const Frame& frame,
                                const FusionOptions& options = {});

/// Combines the experts' bbas; a single expert is returned as is.
MassFunction fuse_tile(std::span<const TileAnnotation> annotations, CombinationRule rule, const Frame& frame,
                       const FusionOptions& options = {});

struct AnnotatedTile {
  std::string id;
  std::vector<TileAnnotation> experts;
};

struct ReferenceEntry {
  std::string tile_id;
  MassFunction fused;
  FocalSet decision;
  double conflict = 0.0;
  /// Decision under the comparison rule, when one was requested.
  std::optional<FocalSet> compared_decision;
};

struct ReferenceMap {
  Frame frame;
  CombinationRule rule = CombinationRule::pcr;
  DecisionCriterion criterion = DecisionCriterion::max_betp;
  std::vector<ReferenceEntry> entries;
  double mean_conflict = 0.0;
  std::optional<CombinationRule> compared_rule;
  std::optional<double> disagreement_rate;
};

struct ReferenceOptions {
  CombinationRule rule = CombinationRule::pcr;
  DecisionCriterion criterion = DecisionCriterion::max_betp;
  /// Empty means the singletons of the frame.
  std::vector<FocalSet> candidates;
  FusionOptions fusion;
  std::optional<CombinationRule> compare_with;
};

/// Fuses and decides every tile. Per-tile conflict is the conjunctive empty-set
/// mass between the tile's experts (0 for a single expert).
ReferenceMap build_reference_map(std::span<const AnnotatedTile> tiles, const Frame& frame,
                                 const ReferenceOptions& options = {});

/// Fraction of tiles decided differently in two maps over the same tiles.
double decision_disagreement(const ReferenceMap& a, const ReferenceMap& b);

/// Rewrites each focal set as the union of its members' images.
/// Labels missing from `mapping` map to the same label in `target`.
MassFunction merge_classes(const MassFunction& m, const std::map<std::string, std::string>& mapping,
                           const Frame& target);
MassFunction merge_classes(const MassFunction& m, const std::map<std::string, std::string>& mapping);

/// Pixel-level label from an expert segmentation. A boundary pixel names the
/// two classes it separates.
struct PixelLabel {
  std::string label;
  Certainty certainty = Certainty::sure;
  std::optional<std::string> boundary_with;
};

/// Per-(class, certainty) proportions over a tile. Boundary pixels count half
/// to each adjacent class at the boundary's certainty.
std::vector<AnnotationEntry> proportions_from_pixels(std::span<const PixelLabel> pixels);

}  // namespace beliefnet

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beliefnet/expert_fusion.hpp"
#include "beliefnet/mass_function.hpp"
#include "beliefnet/texture.hpp"

namespace beliefnet {

/// Raised for malformed input files.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Mass functions: {"frame":["A","B"],"masses":{"A":0.6,"A|B":0.4}}, "{}" is the empty set.
nlohmann::json mass_to_json(const MassFunction& m);
MassFunction mass_from_json(const nlohmann::json& j);
/// Masses keyed against an already known frame.
MassFunction masses_from_json(const Frame& frame, const nlohmann::json& masses);
nlohmann::json masses_to_json(const MassFunction& m);

/// Stable text form of a JSON document (2-space indent, trailing newline).
std::string dump_json(const nlohmann::json& j);

// Annotations: {"frame":[...],"tiles":[{"id":..,"experts":[{"expert":..,"entries":[{"class","certainty","p"}]}]}]}
struct AnnotationSet {
  Frame frame;
  std::vector<AnnotatedTile> tiles;
};
AnnotationSet annotations_from_json(const nlohmann::json& j);
nlohmann::json annotations_to_json(const AnnotationSet& set);

/// tile_id,decided_label,conflict
std::string reference_csv(const ReferenceMap& map);
/// {"frame":[...],"rule":..,"criterion":..,"mean_conflict":..,"tiles":[{"id","decision","conflict","masses"}]}
nlohmann::json reference_to_json(const ReferenceMap& map);

struct FusedTile {
  std::string id;
  MassFunction mass;
};
/// Reads the "tiles" of a reference sidecar back as (id, fused bba) pairs.
std::vector<FusedTile> fused_tiles_from_json(const nlohmann::json& j);

// Binary 8-bit PGM (P5).
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);
std::string encode_pgm(const GrayImage& image);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
/// Every *.pgm in `dir`, sorted by file name; tile id is the file stem.
std::vector<GrayTile> read_tile_directory(const std::filesystem::path& dir);

// Features CSV: header "tile_id,f1,...,f24".
std::string features_csv(const std::vector<FeatureVector>& features);
std::vector<FeatureVector> parse_features_csv(const std::string& text);

/// Simple comma-separated parsing (no quoting).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace beliefnet

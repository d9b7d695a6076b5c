#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "beliefnet/expert_fusion.hpp"
#include "beliefnet/io.hpp"
#include "beliefnet/texture.hpp"

namespace beliefnet {

enum class TextureKind { noise, stripes, blobs };

struct TextureRecipe {
  std::string label;
  TextureKind kind = TextureKind::noise;
  double mean = 128.0;
  double noise_sd = 12.0;
  /// Stripes: wavelength in pixels and orientation; blobs: typical radius.
  double period = 8.0;
  double angle_deg = 0.0;
  /// Stripe amplitude, or blob brightness offset.
  double contrast = 50.0;
  /// Blobs per 64x64 area.
  double density = 10.0;
};

struct ExpertProfile {
  std::string id;
  double error_rate = 0.0;
  /// Probabilities of sure, moderately sure and not sure.
  std::array<double, 3> certainty = {1.0, 0.0, 0.0};
};

struct SynthConfig {
  std::vector<TextureRecipe> classes;
  int tiles_per_class = 100;
  int tile_size = 64;
  std::vector<ExpertProfile> experts;
  double mixed_fraction = 0.0;
  /// Width in pixels of the labelled boundary band in mixed tiles.
  int boundary_width = 2;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when the configuration cannot be honoured.
  void validate() const;
};

/// Built-in texture recipes, one per class label A..G.
std::vector<TextureRecipe> preset_textures(int count);
/// `count` experts E1.. sharing one error rate and certainty distribution.
std::vector<ExpertProfile> preset_experts(int count, double error_rate, std::array<double, 3> certainty = {0.6, 0.3, 0.1});

struct Corpus {
  Frame frame;
  std::vector<GrayTile> tiles;
  /// Dominant class of each tile.
  std::vector<std::string> truth;
  std::vector<bool> mixed;
  std::vector<AnnotatedTile> annotations;
};

/// Renders textures and simulated expert annotations; deterministic per seed.
Corpus synth_corpus(const SynthConfig& cfg);

GrayImage render_texture(const TextureRecipe& recipe, int size, std::uint64_t seed);

/// Layout: tiles/<id>.pgm, annotations.json, truth.csv (tile_id,label,mixed).
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus read_corpus(const std::filesystem::path& dir);

}  // namespace beliefnet

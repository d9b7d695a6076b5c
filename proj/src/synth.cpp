#include "beliefnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace beliefnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

double uniform01(std::mt19937_64& gen) { return std::uniform_real_distribution<double>(0.0, 1.0)(gen); }

Certainty draw_certainty(const ExpertProfile& expert, std::mt19937_64& gen) {
  const double u = uniform01(gen);
  if (u < expert.certainty[0]) return Certainty::sure;
  if (u < expert.certainty[0] + expert.certainty[1]) return Certainty::moderately_sure;
  return Certainty::not_sure;
}

std::size_t draw_label(std::size_t truth, std::size_t classes, double error_rate, std::mt19937_64& gen) {
  if (classes < 2 || uniform01(gen) >= error_rate) return truth;
  auto other = std::uniform_int_distribution<std::size_t>(0, classes - 2)(gen);
  return other >= truth ? other + 1 : other;
}

std::string tile_name(std::size_t index) {
  std::string digits = std::to_string(index);
  return "t" + std::string(digits.size() < 5 ? 5 - digits.size() : 0, '0') + digits;
}

}  // namespace

void SynthConfig::validate() const {
  if (classes.empty()) throw std::invalid_argument("synthetic corpus needs at least one class");
  if (classes.size() > kMaxFrameSize) throw std::invalid_argument("at most 16 classes are supported");
  if (tiles_per_class < 1) throw std::invalid_argument("tiles per class must be at least 1");
  if (tile_size < 8) throw std::invalid_argument("tile size must be at least 8 pixels");
  if (boundary_width < 0 || boundary_width >= tile_size / 4)
    throw std::invalid_argument("boundary width must be in [0, tile_size/4)");
  if (experts.empty()) throw std::invalid_argument("synthetic corpus needs at least one expert");
  if (!(mixed_fraction >= 0.0 && mixed_fraction <= 1.0)) throw std::invalid_argument("mixed fraction must lie in [0,1]");
  if (mixed_fraction > 0.0 && classes.size() < 2) throw std::invalid_argument("mixed tiles need at least two classes");
  for (const auto& e : experts) {
    if (!(e.error_rate >= 0.0 && e.error_rate <= 1.0))
      throw std::invalid_argument("expert '" + e.id + "' error rate must lie in [0,1]");
    if (e.error_rate > 0.0 && classes.size() < 2)
      throw std::invalid_argument("expert errors need at least two classes");
    double sum = 0.0;
    for (double p : e.certainty) {
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("certainty probabilities must lie in [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("certainty probabilities of '" + e.id + "' must sum to 1");
  }
  for (const auto& c : classes) {
    if (c.kind != TextureKind::noise && !(c.period > 0.0))
      throw std::invalid_argument("texture '" + c.label + "' needs a positive period");
    if (!(c.noise_sd >= 0.0)) throw std::invalid_argument("texture '" + c.label + "' needs a non-negative noise level");
  }
}

std::vector<TextureRecipe> preset_textures(int count) {
  // clang-format off
  static const std::vector<TextureRecipe> presets = {
      {"A", TextureKind::blobs,    90.0, 10.0,  5.0,  0.0,  90.0, 12.0},  // rock
      {"B", TextureKind::noise,   160.0,  6.0,  1.0,  0.0,   0.0,  0.0},  // sand
      {"C", TextureKind::stripes, 120.0,  8.0,  8.0,  0.0,  60.0,  0.0},  // ripple
      {"D", TextureKind::noise,   100.0, 30.0,  1.0,  0.0,   0.0,  0.0},  // silt
      {"E", TextureKind::stripes, 140.0,  8.0, 12.0, 45.0,  50.0,  0.0},  // oblique ripple
      {"F", TextureKind::noise,    25.0,  4.0,  1.0,  0.0,   0.0,  0.0},  // shadow
      {"G", TextureKind::blobs,   200.0,  8.0,  3.0,  0.0, -70.0, 30.0},  // other
  };
  // clang-format on
  if (count < 1 || count > static_cast<int>(presets.size()))
    throw std::invalid_argument("between 1 and 7 preset classes are available");
  return {presets.begin(), presets.begin() + count};
}

std::vector<ExpertProfile> preset_experts(int count, double error_rate, std::array<double, 3> certainty) {
  if (count < 1) throw std::invalid_argument("need at least one expert");
  std::vector<ExpertProfile> out;
  for (int i = 0; i < count; ++i) out.push_back({"E" + std::to_string(i + 1), error_rate, certainty});
  return out;
}

GrayImage render_texture(const TextureRecipe& recipe, int size, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::MatrixXd value = Eigen::MatrixXd::Constant(size, size, recipe.mean);

  switch (recipe.kind) {
    case TextureKind::noise:
      break;
    case TextureKind::stripes: {
      const double theta = recipe.angle_deg * std::numbers::pi / 180.0;
      const double phase = uniform01(gen) * 2.0 * std::numbers::pi;
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
          value(r, c) += recipe.contrast *
                         std::sin(2.0 * std::numbers::pi * (c * std::cos(theta) + r * std::sin(theta)) / recipe.period + phase);
      break;
    }
    case TextureKind::blobs: {
      const auto count = static_cast<int>(std::lround(recipe.density * size * size / (64.0 * 64.0)));
      for (int b = 0; b < count; ++b) {
        const double cr = uniform01(gen) * size;
        const double cc = uniform01(gen) * size;
        const double radius = recipe.period * (0.6 + 0.8 * uniform01(gen));
        for (int r = 0; r < size; ++r)
          for (int c = 0; c < size; ++c)
            if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= radius * radius) value(r, c) = recipe.mean + recipe.contrast;
      }
      break;
    }
  }

  GrayImage img(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c)
      img(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(value(r, c) + recipe.noise_sd * noise(gen)), 0L, 255L));
  return img;
}

Corpus synth_corpus(const SynthConfig& cfg) {
  cfg.validate();
  Corpus corpus;
  {
    std::vector<std::string> labels;
    for (const auto& c : cfg.classes) labels.push_back(c.label);
    corpus.frame = Frame(std::move(labels));
  }
  const std::size_t classes = cfg.classes.size();
  const std::size_t total = classes * static_cast<std::size_t>(cfg.tiles_per_class);
  const int size = cfg.tile_size;

  std::vector<bool> mixed(total, false);
  {
    std::mt19937_64 gen(derive_seed(cfg.seed, 1, 0));
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), gen);
    const auto count = static_cast<std::size_t>(std::llround(cfg.mixed_fraction * static_cast<double>(total)));
    for (std::size_t i = 0; i < count; ++i) mixed[order[i]] = true;
  }

  for (std::size_t t = 0; t < total; ++t) {
    std::mt19937_64 gen(derive_seed(cfg.seed, 2, t));
    const std::size_t dominant = t % classes;
    const std::string id = tile_name(t);

    GrayImage img = render_texture(cfg.classes[dominant], size, derive_seed(cfg.seed, 3, t));
    std::size_t second = dominant;
    int split = size;
    if (mixed[t]) {
      second = (dominant + 1 + std::uniform_int_distribution<std::size_t>(0, classes - 2)(gen)) % classes;
      split = static_cast<int>(std::lround((0.55 + 0.25 * uniform01(gen)) * size));
      const GrayImage other = render_texture(cfg.classes[second], size, derive_seed(cfg.seed, 4, t));
      img.rightCols(size - split) = other.rightCols(size - split);
    }
    corpus.tiles.push_back({id, std::move(img)});
    corpus.truth.push_back(cfg.classes[dominant].label);
    corpus.mixed.push_back(mixed[t]);

    AnnotatedTile annotated{id, {}};
    for (std::size_t e = 0; e < cfg.experts.size(); ++e) {
      const ExpertProfile& expert = cfg.experts[e];
      std::mt19937_64 egen(derive_seed(cfg.seed, 5 + e, t));
      TileAnnotation a{expert.id, {}};
      const std::size_t left = draw_label(dominant, classes, expert.error_rate, egen);
      const Certainty left_certainty = draw_certainty(expert, egen);
      if (!mixed[t]) {
        a.entries.push_back({cfg.classes[left].label, left_certainty, 1.0});
      } else {
        const std::size_t right = draw_label(second, classes, expert.error_rate, egen);
        const Certainty right_certainty = draw_certainty(expert, egen);
        const Certainty boundary_certainty = draw_certainty(expert, egen);
        // Labels are constant down each column, so one row carries the proportions.
        const int band_start = split - cfg.boundary_width / 2;
        const int band_end = band_start + cfg.boundary_width;
        std::vector<PixelLabel> row;
        row.reserve(static_cast<std::size_t>(size));
        for (int c = 0; c < size; ++c) {
          if (c >= band_start && c < band_end && left != right)
            row.push_back({cfg.classes[left].label, boundary_certainty, cfg.classes[right].label});
          else if (c < split)
            row.push_back({cfg.classes[left].label, left_certainty, std::nullopt});
          else
            row.push_back({cfg.classes[right].label, right_certainty, std::nullopt});
        }
        a.entries = proportions_from_pixels(row);
      }
      annotated.experts.push_back(std::move(a));
    }
    corpus.annotations.push_back(std::move(annotated));
  }
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "tiles");
  for (const auto& tile : corpus.tiles) write_pgm(dir / "tiles" / (tile.id + ".pgm"), tile.pixels);
  write_text(dir / "annotations.json", dump_json(annotations_to_json({corpus.frame, corpus.annotations})));
  std::string truth = "tile_id,label,mixed\n";
  for (std::size_t i = 0; i < corpus.tiles.size(); ++i)
    truth += corpus.tiles[i].id + "," + corpus.truth[i] + "," + (corpus.mixed[i] ? "1" : "0") + "\n";
  write_text(dir / "truth.csv", truth);
}

Corpus read_corpus(const std::filesystem::path& dir) {
  Corpus corpus;
  auto annotations = annotations_from_json(nlohmann::json::parse(read_text(dir / "annotations.json")));
  corpus.frame = annotations.frame;
  corpus.annotations = std::move(annotations.tiles);
  corpus.tiles = read_tile_directory(dir / "tiles");

  std::map<std::string, std::pair<std::string, bool>> truth;
  const auto rows = parse_csv(read_text(dir / "truth.csv"));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) throw FormatError("truth.csv row " + std::to_string(r) + " is malformed");
    truth[rows[r][0]] = {rows[r][1], rows[r].size() > 2 && rows[r][2] == "1"};
  }
  if (corpus.tiles.size() != corpus.annotations.size())
    throw FormatError("corpus has " + std::to_string(corpus.tiles.size()) + " tiles but " +
                      std::to_string(corpus.annotations.size()) + " annotated tiles");
  std::map<std::string, AnnotatedTile> by_id;
  for (auto& a : corpus.annotations) by_id.emplace(a.id, std::move(a));
  corpus.annotations.clear();
  for (std::size_t i = 0; i < corpus.tiles.size(); ++i) {
    const auto& id = corpus.tiles[i].id;
    auto found = by_id.find(id);
    if (found == by_id.end()) throw FormatError("annotations.json has no entry for tile '" + id + "'");
    corpus.annotations.push_back(std::move(found->second));
    auto it = truth.find(id);
    if (it == truth.end()) throw FormatError("truth.csv has no label for tile '" + id + "'");
    corpus.truth.push_back(it->second.first);
    corpus.mixed.push_back(it->second.second);
  }
  return corpus;
}

}  // namespace beliefnet

#include "beliefnet/texture.hpp"

namespace beliefnet {

FeatureVector extract24(const GrayTile& tile, int levels) {
  if (tile.height() < 2 || tile.width() < 2) throw std::invalid_argument("tile '" + tile.id + "' is smaller than 2x2");
  FeatureVector out;
  out.tile_id = tile.id;
  Eigen::Index k = 0;
  for (Direction d : kDirections) {
    const auto f = haralick6(cooccurrence<double>(tile.pixels, d, levels));
    out.values.segment<6>(k) << f.homogeneity, f.contrast, f.entropy, f.correlation, f.directivity, f.uniformity;
    k += 6;
  }
  return out;
}

std::array<std::string, kFeatureCount> feature_names() {
  std::array<std::string, kFeatureCount> names;
  for (int i = 0; i < kFeatureCount; ++i) names[static_cast<std::size_t>(i)] = "f" + std::to_string(i + 1);
  return names;
}

}  // namespace beliefnet

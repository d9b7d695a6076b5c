#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace beliefnet {

using GrayImage = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GrayTile {
  std::string id;
  GrayImage pixels;

  Eigen::Index height() const { return pixels.rows(); }
  Eigen::Index width() const { return pixels.cols(); }
};

enum class Direction { deg0 = 0, deg45 = 45, deg90 = 90, deg135 = 135 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::deg0, Direction::deg45, Direction::deg90,
                                                         Direction::deg135};

/// Row/column step to the neighbour at distance 1 (rows grow downwards).
inline std::pair<int, int> direction_offset(Direction d) {
  switch (d) {
    case Direction::deg0: return {0, 1};
    case Direction::deg45: return {-1, 1};
    case Direction::deg90: return {-1, 0};
    case Direction::deg135: return {-1, -1};
  }
  throw std::invalid_argument("unknown direction");
}

inline Direction parse_direction(int degrees) {
  switch (degrees) {
    case 0: return Direction::deg0;
    case 45: return Direction::deg45;
    case 90: return Direction::deg90;
    case 135: return Direction::deg135;
    default: throw std::invalid_argument("direction must be 0, 45, 90 or 135 degrees");
  }
}

/// Uniform quantization of an 8-bit value into `levels` bins.
inline int quantize(std::uint8_t value, int levels) { return static_cast<int>(value) * levels / 256; }

template <typename Scalar = double>
using Glcm = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Symmetric normalized gray-level co-occurrence matrix at distance 1.
template <typename Scalar = double>
Glcm<Scalar> cooccurrence(const GrayImage& image, Direction direction, int levels = 16) {
  if (levels < 2 || levels > 256) throw std::invalid_argument("levels must lie in [2,256]");
  const auto [dr, dc] = direction_offset(direction);
  const Eigen::Index rows = image.rows(), cols = image.cols();
  if (rows < 1 + std::abs(dr) || cols < 1 + std::abs(dc))
    throw std::invalid_argument("tile is smaller than the co-occurrence offset");

  Glcm<Scalar> counts = Glcm<Scalar>::Zero(levels, levels);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index r2 = r + dr;
    if (r2 < 0 || r2 >= rows) continue;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::Index c2 = c + dc;
      if (c2 < 0 || c2 >= cols) continue;
      const int a = quantize(image(r, c), levels);
      const int b = quantize(image(r2, c2), levels);
      counts(a, b) += Scalar(1);
      counts(b, a) += Scalar(1);
    }
  }
  return counts / counts.sum();
}

template <typename Scalar = double>
struct HaralickFeatures {
  Scalar homogeneity{};
  Scalar contrast{};
  Scalar entropy{};
  Scalar correlation{};
  Scalar directivity{};
  Scalar uniformity{};
};

/// Six co-occurrence statistics. Entropy is in bits; correlation is 0 when
/// either marginal has zero variance; directivity is the diagonal mass.
template <typename Derived>
HaralickFeatures<typename Derived::Scalar> haralick6(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::log2;
  using std::sqrt;
  if (p.rows() != p.cols() || p.rows() == 0) throw std::invalid_argument("co-occurrence matrix must be square");
  if (abs(p.sum() - Scalar(1)) > Scalar(1e-9) || (p.array() < Scalar(0)).any())
    throw std::invalid_argument("co-occurrence matrix is not normalized");

  const Eigen::Index n = p.rows();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> idx = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(n, 0, n - 1);
  const auto row_marginal = p.rowwise().sum();
  const auto col_marginal = p.colwise().sum().transpose();
  const Scalar mu_i = idx.dot(row_marginal);
  const Scalar mu_j = idx.dot(col_marginal);
  const Scalar var_i = (idx.array() - mu_i).square().matrix().dot(row_marginal);
  const Scalar var_j = (idx.array() - mu_j).square().matrix().dot(col_marginal);

  HaralickFeatures<Scalar> f;
  Scalar covariance(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar v = p(i, j);
      if (v == Scalar(0)) continue;
      const Scalar diff = Scalar(i - j);
      f.homogeneity += v / (Scalar(1) + abs(diff));
      f.contrast += diff * diff * v;
      f.entropy -= v * log2(v);
      covariance += (Scalar(i) - mu_i) * (Scalar(j) - mu_j) * v;
      f.uniformity += v * v;
    }
  }
  f.directivity = p.diagonal().sum();
  const Scalar sigma = sqrt(var_i * var_j);
  f.correlation = sigma > Scalar(1e-15) ? covariance / sigma : Scalar(0);
  return f;
}

inline constexpr int kFeatureCount = 24;

/// Direction-major (0, 45, 90, 135) blocks of homogeneity, contrast, entropy,
/// correlation, directivity, uniformity.
struct FeatureVector {
  std::string tile_id;
  Eigen::Matrix<double, kFeatureCount, 1> values;
};

FeatureVector extract24(const GrayTile& tile, int levels = 16);

/// Column names used in feature CSV files (after "tile_id").
std::array<std::string, kFeatureCount> feature_names();

}  // namespace beliefnet

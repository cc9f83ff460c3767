#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fasemcom/geometry.hpp"

namespace fasemcom {

/// Rectangular raster of values in [0,1], row-major. Used for grayscale
/// images, attention maps, and per-patch BER maps alike.
struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return values.size(); }

  static Heatmap zeros(int width, int height);
};

/// Min-max rescale to [0,1]; a constant raster maps to all-zero.
Heatmap normalize_min_max(const Heatmap& map);

/// Reads binary "HMAP" (u32 width, u32 height, f32 values, little-endian)
/// or plain-text PGM (P2, values rescaled by maxval). Binary PGM (P5,
/// maxval <= 255) is accepted for image inputs.
Heatmap load_heatmap(std::istream& in);
Heatmap load_heatmap_file(const std::filesystem::path& path);

/// Writes the binary HMAP format; values are narrowed to f32.
void save_heatmap(std::ostream& out, const Heatmap& map);
void save_heatmap_file(const std::filesystem::path& path, const Heatmap& map);

}  // namespace fasemcom

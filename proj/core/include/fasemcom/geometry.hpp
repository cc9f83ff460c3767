#pragma once

#include <span>
#include <utility>

namespace fasemcom {

/// Axis-aligned pixel rectangle, [x0,x1) x [y0,y1).
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  long long area() const { return 1LL * width() * height(); }

  bool contains(double px, double py) const {
    return px >= x0 && px < x1 && py >= y0 && py < y1;
  }
  bool intersects(const Box& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }
  bool operator==(const Box&) const = default;
};

Box union_box(std::span<const Box> boxes);

using ImageSize = std::pair<int, int>;  // (width, height)

/// Square tile of tile_resolution px split into patch_size x patch_size
/// blocks; patch_count = (tile_resolution / patch_size)^2.
struct PatchGrid {
  int tile_resolution = 0;  // pixels per tile side
  int patch_size = 0;       // pixels per patch side
  int patches_per_side = 0;
  int patch_count = 0;

  bool operator==(const PatchGrid&) const = default;
};

/// Throws invalid_argument unless patch_size divides tile_resolution.
PatchGrid make_grid(int tile_resolution, int patch_size);

}  // namespace fasemcom

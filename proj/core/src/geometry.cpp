#include "fasemcom/geometry.hpp"

#include <algorithm>

#include "fasemcom/errors.hpp"

namespace fasemcom {

Box union_box(std::span<const Box> boxes) {
  if (boxes.empty()) fail(Errc::empty_boxes, "union of zero boxes");
  Box u = boxes[0];
  for (const Box& b : boxes.subspan(1)) {
    u.x0 = std::min(u.x0, b.x0);
    u.y0 = std::min(u.y0, b.y0);
    u.x1 = std::max(u.x1, b.x1);
    u.y1 = std::max(u.y1, b.y1);
  }
  return u;
}

PatchGrid make_grid(int tile_resolution, int patch_size) {
  if (tile_resolution <= 0 || patch_size <= 0)
    fail(Errc::invalid_argument, "grid dimensions must be positive");
  if (tile_resolution % patch_size != 0)
    fail(Errc::invalid_argument, "patch size must divide the tile resolution");
  PatchGrid g;
  g.tile_resolution = tile_resolution;
  g.patch_size = patch_size;
  g.patches_per_side = tile_resolution / patch_size;
  g.patch_count = g.patches_per_side * g.patches_per_side;
  return g;
}

}  // namespace fasemcom

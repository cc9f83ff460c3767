#pragma once

#include <span>
#include <vector>

#include "fasemcom/geometry.hpp"
#include "fasemcom/heatmap.hpp"

namespace fasemcom {

enum class ObjectiveProvider { file, spectral_residual, center_prior };

/// Spectral-residual saliency: 2-D FFT, log magnitude, minus its 3x3 box
/// filter, inverse FFT of the residual spectrum, squared magnitude,
/// Gaussian smoothing, min-max normalization. A constant image yields the
/// all-zero map.
Heatmap spectral_residual_saliency(const Heatmap& image);

/// Isotropic Gaussian centered on the image, sigma = 0.3 * min(W,H),
/// min-max normalized.
Heatmap center_prior_saliency(int width, int height);

/// Dispatch over the provider choice. `file_map` is required (and must
/// match the image dimensions) for ObjectiveProvider::file; it is returned
/// min-max normalized.
Heatmap objective_heatmap(const Heatmap& image, ObjectiveProvider provider,
                          const Heatmap* file_map = nullptr);

/// Binary mask: 1 inside any box, 0 elsewhere. An empty box list (the
/// no-match fallback) yields the all-zero map.
Heatmap subjective_heatmap(ImageSize image_size, std::span<const Box> boxes);

/// H_a = alpha*h_obj + (1-alpha)*h_sub, pointwise, no renormalization.
Heatmap fuse(const Heatmap& h_obj, const Heatmap& h_sub, double alpha);

enum class PatchReduce { mean, max };  // mean is the default, tested path

struct PatchWeights {
  PatchGrid grid;
  std::vector<double> raw;  // N values >= 0
  std::vector<int> levels;  // N values in [1, level_count] once quantized
  int level_count = 0;
};

/// Restricts the heatmap to `region`, resamples it bilinearly to the tile
/// resolution and reduces each patch to a scalar.
PatchWeights patch_weights(const Heatmap& fused, const Box& region, const PatchGrid& grid,
                           PatchReduce reduce = PatchReduce::mean);

/// Level 1 for zero weight; otherwise ceil(Norm(w) * (L-1)) + 1 with Norm
/// the min-max scaling over this tile's positive weights. All positive
/// weights equal means Norm == 1, i.e. level L everywhere positive.
PatchWeights quantize_levels(PatchWeights weights, int level_count);

/// Patch footprints (of `region` mapped onto the grid) overlapping any of
/// the boxes. min_coverage is the required fraction of the footprint
/// inside a single box (0 marks any overlap, 0.5 marks majority-covered
/// patches). Geometric counterpart of the subjective-attention levels.
std::vector<bool> box_patch_mask(const Box& region, std::span<const Box> boxes,
                                 const PatchGrid& grid, double min_coverage = 0.0);

}  // namespace fasemcom

#include "fasemcom/attention.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fftw3.h>

#include "fasemcom/errors.hpp"

namespace fasemcom {

namespace {

bool is_constant(const Heatmap& image) {
  auto [mn, mx] = std::minmax_element(image.values.begin(), image.values.end());
  return *mx <= *mn;
}

// 3x3 mean with replicated borders.
std::vector<double> box_filter_3x3(const std::vector<double>& src, int w, int h) {
  std::vector<double> dst(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          int xx = std::clamp(x + dx, 0, w - 1);
          sum += src[std::size_t(yy) * w + xx];
        }
      }
      dst[std::size_t(y) * w + x] = sum / 9.0;
    }
  }
  return dst;
}

// Separable Gaussian, replicated borders.
void gaussian_smooth(std::vector<double>& img, int w, int h, double sigma) {
  const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(radius + 1);
  double norm = 0.0;
  for (int i = 0; i <= radius; ++i) {
    kernel[i] = std::exp(-0.5 * (double(i) * i) / (sigma * sigma));
    norm += (i == 0) ? kernel[i] : 2.0 * kernel[i];
  }
  for (double& k : kernel) k /= norm;

  std::vector<double> tmp(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = kernel[0] * img[std::size_t(y) * w + x];
      for (int i = 1; i <= radius; ++i) {
        int xl = std::clamp(x - i, 0, w - 1);
        int xr = std::clamp(x + i, 0, w - 1);
        sum += kernel[i] * (img[std::size_t(y) * w + xl] + img[std::size_t(y) * w + xr]);
      }
      tmp[std::size_t(y) * w + x] = sum;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = kernel[0] * tmp[std::size_t(y) * w + x];
      for (int i = 1; i <= radius; ++i) {
        int yu = std::clamp(y - i, 0, h - 1);
        int yd = std::clamp(y + i, 0, h - 1);
        sum += kernel[i] * (tmp[std::size_t(yu) * w + x] + tmp[std::size_t(yd) * w + x]);
      }
      img[std::size_t(y) * w + x] = sum;
    }
  }
}

}  // namespace

Heatmap spectral_residual_saliency(const Heatmap& image) {
  if (image.values.empty()) fail(Errc::invalid_argument, "saliency of an empty image");
  const int w = image.width, h = image.height;
  if (is_constant(image)) return Heatmap::zeros(w, h);

  const std::size_t n = image.values.size();
  fftw_complex* buf = fftw_alloc_complex(n);
  fftw_complex* spec = fftw_alloc_complex(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = image.values[i];
    buf[i][1] = 0.0;
  }
  fftw_plan fwd = fftw_plan_dft_2d(h, w, buf, spec, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  std::vector<double> log_mag(n), phase(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mag = std::hypot(spec[i][0], spec[i][1]);
    log_mag[i] = std::log(mag + 1e-12);
    phase[i] = std::atan2(spec[i][1], spec[i][0]);
  }
  const std::vector<double> smoothed = box_filter_3x3(log_mag, w, h);
  for (std::size_t i = 0; i < n; ++i) {
    double residual = log_mag[i] - smoothed[i];
    double mag = std::exp(residual);
    spec[i][0] = mag * std::cos(phase[i]);
    spec[i][1] = mag * std::sin(phase[i]);
  }

  fftw_plan bwd = fftw_plan_dft_2d(h, w, spec, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);

  Heatmap out;
  out.width = w;
  out.height = h;
  out.values.resize(n);
  const double scale = 1.0 / double(n);  // FFTW's backward transform is unnormalized
  for (std::size_t i = 0; i < n; ++i) {
    double re = buf[i][0] * scale, im = buf[i][1] * scale;
    out.values[i] = re * re + im * im;
  }
  fftw_free(buf);
  fftw_free(spec);

  gaussian_smooth(out.values, w, h, std::max(1.0, 0.02 * std::min(w, h)));
  return normalize_min_max(out);
}

Heatmap center_prior_saliency(int width, int height) {
  if (width <= 0 || height <= 0) fail(Errc::invalid_argument, "empty image");
  Heatmap out = Heatmap::zeros(width, height);
  const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
  const double sigma = 0.3 * std::min(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      out.at(x, y) =
          std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2.0 * sigma * sigma));
  return normalize_min_max(out);
}

Heatmap objective_heatmap(const Heatmap& image, ObjectiveProvider provider,
                          const Heatmap* file_map) {
  if (image.values.empty()) fail(Errc::invalid_argument, "objective_heatmap: empty image");
  switch (provider) {
    case ObjectiveProvider::file:
      if (!file_map) fail(Errc::invalid_argument, "file provider without a heatmap");
      if (file_map->width != image.width || file_map->height != image.height)
        fail(Errc::dimension_mismatch, "heatmap raster does not match the image size");
      return normalize_min_max(*file_map);
    case ObjectiveProvider::spectral_residual:
      return spectral_residual_saliency(image);
    case ObjectiveProvider::center_prior:
      return center_prior_saliency(image.width, image.height);
  }
  fail(Errc::invalid_argument, "unknown objective provider");
}

Heatmap subjective_heatmap(ImageSize image_size, std::span<const Box> boxes) {
  const auto [w, h] = image_size;
  Heatmap out = Heatmap::zeros(w, h);
  for (const Box& b : boxes) {
    if (b.x0 < 0 || b.y0 < 0 || b.x1 > w || b.y1 > h)
      fail(Errc::invalid_argument, "subjective box outside the image");
    for (int y = b.y0; y < b.y1; ++y)
      for (int x = b.x0; x < b.x1; ++x) out.at(x, y) = 1.0;
  }
  return out;
}

Heatmap fuse(const Heatmap& h_obj, const Heatmap& h_sub, double alpha) {
  if (h_obj.width != h_sub.width || h_obj.height != h_sub.height)
    fail(Errc::dimension_mismatch, "fuse: heatmap sizes differ");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    fail(Errc::alpha_out_of_range, "alpha must lie in [0,1]");
  Heatmap out = h_obj;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = alpha * h_obj.values[i] + (1.0 - alpha) * h_sub.values[i];
  return out;
}

PatchWeights patch_weights(const Heatmap& fused, const Box& region, const PatchGrid& grid,
                           PatchReduce reduce) {
  if (region.x0 < 0 || region.y0 < 0 || region.x1 > fused.width ||
      region.y1 > fused.height || region.width() <= 0 || region.height() <= 0)
    fail(Errc::dimension_mismatch, "patch_weights: region outside the heatmap");
  if (grid.patch_count <= 0) fail(Errc::invalid_argument, "patch_weights: empty grid");

  const int p = grid.tile_resolution, s = grid.patch_size, pps = grid.patches_per_side;
  const double rw = region.width(), rh = region.height();

  PatchWeights out;
  out.grid = grid;
  out.raw.assign(std::size_t(grid.patch_count), reduce == PatchReduce::mean ? 0.0 : -1.0);

  // Bilinear resample of the region to the tile resolution, reduced per patch.
  for (int ty = 0; ty < p; ++ty) {
    double sy = region.y0 + (ty + 0.5) * rh / p - 0.5;
    sy = std::clamp(sy, double(region.y0), double(region.y1 - 1));
    const int iy0 = int(std::floor(sy));
    const int iy1 = std::min(iy0 + 1, region.y1 - 1);
    const double fy = sy - iy0;
    for (int tx = 0; tx < p; ++tx) {
      double sx = region.x0 + (tx + 0.5) * rw / p - 0.5;
      sx = std::clamp(sx, double(region.x0), double(region.x1 - 1));
      const int ix0 = int(std::floor(sx));
      const int ix1 = std::min(ix0 + 1, region.x1 - 1);
      const double fx = sx - ix0;
      const double v = (1.0 - fy) * ((1.0 - fx) * fused.at(ix0, iy0) + fx * fused.at(ix1, iy0)) +
                       fy * ((1.0 - fx) * fused.at(ix0, iy1) + fx * fused.at(ix1, iy1));
      const std::size_t patch = std::size_t(ty / s) * pps + std::size_t(tx / s);
      if (reduce == PatchReduce::mean)
        out.raw[patch] += v;
      else
        out.raw[patch] = std::max(out.raw[patch], v);
    }
  }
  if (reduce == PatchReduce::mean) {
    const double inv = 1.0 / (double(s) * s);
    for (double& r : out.raw) r *= inv;
  }
  return out;
}

PatchWeights quantize_levels(PatchWeights weights, int level_count) {
  if (level_count < 2) fail(Errc::invalid_argument, "level count must be >= 2");
  if (weights.raw.empty()) fail(Errc::invalid_argument, "quantize before computing weights");

  double min_pos = 0.0, max_pos = 0.0;
  bool any_pos = false;
  for (double r : weights.raw) {
    if (r <= 0.0) continue;
    if (!any_pos) {
      min_pos = max_pos = r;
      any_pos = true;
    } else {
      min_pos = std::min(min_pos, r);
      max_pos = std::max(max_pos, r);
    }
  }

  weights.level_count = level_count;
  weights.levels.resize(weights.raw.size());
  for (std::size_t i = 0; i < weights.raw.size(); ++i) {
    const double r = weights.raw[i];
    if (r <= 0.0) {
      weights.levels[i] = 1;
    } else if (max_pos <= min_pos) {
      weights.levels[i] = level_count;  // all positives equal: fully protected
    } else {
      double norm = std::clamp((r - min_pos) / (max_pos - min_pos), 0.0, 1.0);
      int level = int(std::ceil(norm * (level_count - 1))) + 1;
      weights.levels[i] = std::clamp(level, 1, level_count);
    }
  }
  return weights;
}

std::vector<bool> box_patch_mask(const Box& region, std::span<const Box> boxes,
                                 const PatchGrid& grid, double min_coverage) {
  std::vector<bool> mask(std::size_t(grid.patch_count), false);
  const double sx = double(region.width()) / grid.tile_resolution;
  const double sy = double(region.height()) / grid.tile_resolution;
  for (int row = 0; row < grid.patches_per_side; ++row) {
    for (int col = 0; col < grid.patches_per_side; ++col) {
      const double px0 = region.x0 + col * grid.patch_size * sx;
      const double px1 = region.x0 + (col + 1) * grid.patch_size * sx;
      const double py0 = region.y0 + row * grid.patch_size * sy;
      const double py1 = region.y0 + (row + 1) * grid.patch_size * sy;
      const double footprint = (px1 - px0) * (py1 - py0);
      for (const Box& b : boxes) {
        const double ix = std::max(0.0, std::min(px1, double(b.x1)) - std::max(px0, double(b.x0)));
        const double iy = std::max(0.0, std::min(py1, double(b.y1)) - std::max(py0, double(b.y0)));
        const double covered = ix * iy;
        if (covered > 0.0 && covered >= min_coverage * footprint) {
          mask[std::size_t(row) * grid.patches_per_side + col] = true;
          break;
        }
      }
    }
  }
  return mask;
}

}  // namespace fasemcom

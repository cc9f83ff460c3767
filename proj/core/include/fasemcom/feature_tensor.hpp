#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fasemcom/geometry.hpp"

namespace fasemcom {

/// Per-patch feature block: patch_count x dims_per_patch values with a
/// recorded symmetric dynamic range [-v_max, v_max].
struct FeatureTensor {
  PatchGrid grid;
  int dims_per_patch = 0;
  std::vector<double> values;  // patch-major
  double v_max = 1.0;

  std::size_t dim_count() const { return values.size(); }
};

/// Seeded standard-normal features; v_max is the realized max magnitude.
FeatureTensor synthesize_features(const PatchGrid& grid, int dims_per_patch,
                                  std::uint64_t seed);

/// Binary "FTNS": u32 patch_count, u32 dims_per_patch, f32 v_max, then
/// patch_count*dims_per_patch little-endian f32 values, patch-major.
FeatureTensor load_feature_tensor(std::istream& in, const PatchGrid& grid);
FeatureTensor load_feature_tensor_file(const std::filesystem::path& path,
                                       const PatchGrid& grid);
void save_feature_tensor(std::ostream& out, const FeatureTensor& tensor);
void save_feature_tensor_file(const std::filesystem::path& path,
                              const FeatureTensor& tensor);

/// Uniform mid-rise quantization of each value to bits_per_dim bits over
/// [-v_max, v_max]; +v_max maps to the top code, -v_max to code 0.
struct QuantizedFeatures {
  int bits_per_dim = 0;
  double v_max = 1.0;
  std::vector<std::uint32_t> codes;  // one per dimension, patch-major
};

/// Throws invalid_argument for bits outside [2,16], non_finite_value when
/// the tensor contains NaN or infinity.
QuantizedFeatures quantize_features(const FeatureTensor& tensor, int bits_per_dim);

/// Mid-rise reconstruction level of one code.
double dequantize_code(std::uint32_t code, int bits_per_dim, double v_max);

/// The wire order: patch-major, dimension-major, MSB-first, packed
/// MSB-first into bytes.
std::vector<std::uint8_t> to_bitstream(const QuantizedFeatures& q);

}  // namespace fasemcom

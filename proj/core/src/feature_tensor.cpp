#include "fasemcom/feature_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "fasemcom/errors.hpp"
#include "fasemcom/rng.hpp"

namespace fasemcom {

namespace {

std::uint32_t read_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

void write_u32le(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

float bits_to_f32(std::uint32_t bits) {
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

std::uint32_t f32_to_bits(float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  return bits;
}

}  // namespace

FeatureTensor synthesize_features(const PatchGrid& grid, int dims_per_patch,
                                  std::uint64_t seed) {
  if (grid.patch_count <= 0 || dims_per_patch <= 0)
    fail(Errc::invalid_argument, "synthesize_features: empty shape");
  FeatureTensor t;
  t.grid = grid;
  t.dims_per_patch = dims_per_patch;
  t.values.resize(std::size_t(grid.patch_count) * dims_per_patch);
  RngStream rng(derive_key(seed, 0x66656174ULL));  // "feat"
  double v_max = 0.0;
  for (double& v : t.values) {
    v = rng.next_gauss();
    v_max = std::max(v_max, std::abs(v));
  }
  t.v_max = v_max > 0.0 ? v_max : 1.0;
  return t;
}

FeatureTensor load_feature_tensor(std::istream& in, const PatchGrid& grid) {
  char magic[4] = {0};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FTNS", 4) != 0)
    fail(Errc::format_error, "feature tensor: bad magic");
  const std::uint32_t patch_count = read_u32le(in);
  const std::uint32_t dims = read_u32le(in);
  const float v_max = bits_to_f32(read_u32le(in));
  if (!in || patch_count == 0 || dims == 0)
    fail(Errc::format_error, "feature tensor: bad header");
  if (int(patch_count) != grid.patch_count)
    fail(Errc::grid_mismatch, "feature tensor patch count " + std::to_string(patch_count) +
                                  " != grid " + std::to_string(grid.patch_count));
  if (!(v_max > 0.0f)) fail(Errc::format_error, "feature tensor: v_max must be positive");

  FeatureTensor t;
  t.grid = grid;
  t.dims_per_patch = int(dims);
  t.v_max = v_max;
  t.values.resize(std::size_t(patch_count) * dims);
  for (double& v : t.values) v = double(bits_to_f32(read_u32le(in)));
  if (!in) fail(Errc::format_error, "feature tensor: truncated data");
  return t;
}

FeatureTensor load_feature_tensor_file(const std::filesystem::path& path,
                                       const PatchGrid& grid) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open " + path.string());
  return load_feature_tensor(f, grid);
}

void save_feature_tensor(std::ostream& out, const FeatureTensor& t) {
  out.write("FTNS", 4);
  write_u32le(out, std::uint32_t(t.grid.patch_count));
  write_u32le(out, std::uint32_t(t.dims_per_patch));
  write_u32le(out, f32_to_bits(float(t.v_max)));
  for (double v : t.values) write_u32le(out, f32_to_bits(float(v)));
  if (!out) fail(Errc::io_error, "feature tensor: write failed");
}

void save_feature_tensor_file(const std::filesystem::path& path, const FeatureTensor& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  save_feature_tensor(f, t);
}

QuantizedFeatures quantize_features(const FeatureTensor& tensor, int bits_per_dim) {
  if (bits_per_dim < 2 || bits_per_dim > 16)
    fail(Errc::invalid_argument, "bits_per_dim must lie in [2,16]");
  QuantizedFeatures q;
  q.bits_per_dim = bits_per_dim;
  q.v_max = tensor.v_max;
  q.codes.resize(tensor.values.size());
  const std::uint32_t top = (1u << bits_per_dim) - 1;
  const double step_inv = double(1u << bits_per_dim) / (2.0 * tensor.v_max);
  for (std::size_t i = 0; i < tensor.values.size(); ++i) {
    const double v = tensor.values[i];
    if (!std::isfinite(v)) fail(Errc::non_finite_value, "tensor value is not finite");
    const double scaled = (v + tensor.v_max) * step_inv;
    const long long code = static_cast<long long>(std::floor(scaled));
    q.codes[i] = std::uint32_t(std::clamp(code, 0LL, static_cast<long long>(top)));
  }
  return q;
}

double dequantize_code(std::uint32_t code, int bits_per_dim, double v_max) {
  const double step = 2.0 * v_max / double(1u << bits_per_dim);
  return (double(code) + 0.5) * step - v_max;
}

std::vector<std::uint8_t> to_bitstream(const QuantizedFeatures& q) {
  const std::size_t total_bits = q.codes.size() * std::size_t(q.bits_per_dim);
  std::vector<std::uint8_t> bytes((total_bits + 7) / 8, 0);
  std::size_t bit = 0;
  for (std::uint32_t code : q.codes) {
    for (int b = q.bits_per_dim - 1; b >= 0; --b, ++bit) {
      if ((code >> b) & 1u) bytes[bit / 8] |= std::uint8_t(0x80u >> (bit % 8));
    }
  }
  return bytes;
}

}  // namespace fasemcom

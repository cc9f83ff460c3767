#include "fasemcom/heatmap.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "fasemcom/errors.hpp"

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

float read_f32le(std::istream& in) {
  std::uint32_t bits = read_u32le(in);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

void write_f32le(std::ostream& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  write_u32le(out, bits);
}

// PGM header token, skipping whitespace and '#' comment lines.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
        tok.push_back(static_cast<char>(in.get()));
      return tok;
    }
  }
  return tok;
}

Heatmap load_pgm(std::istream& in, bool binary) {
  auto next_int = [&](const char* what) {
    std::string tok = pnm_token(in);
    if (tok.empty()) fail(Errc::format_error, std::string("pgm: missing ") + what);
    long long v = 0;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') fail(Errc::format_error, std::string("pgm: bad ") + what);
      v = v * 10 + (ch - '0');
    }
    return v;
  };
  long long w = next_int("width");
  long long h = next_int("height");
  long long maxval = next_int("maxval");
  if (w <= 0 || h <= 0 || maxval <= 0) fail(Errc::format_error, "pgm: bad header");
  Heatmap map;
  map.width = static_cast<int>(w);
  map.height = static_cast<int>(h);
  map.values.resize(static_cast<std::size_t>(w * h));
  if (binary) {
    if (maxval > 255) fail(Errc::format_error, "pgm: 16-bit P5 not supported");
    in.get();  // single whitespace byte after maxval
    for (double& v : map.values) {
      int c = in.get();
      if (c == EOF) fail(Errc::format_error, "pgm: truncated pixel data");
      v = static_cast<double>(c) / static_cast<double>(maxval);
    }
  } else {
    for (double& v : map.values) {
      long long p = next_int("pixel");
      if (p > maxval) fail(Errc::format_error, "pgm: pixel above maxval");
      v = static_cast<double>(p) / static_cast<double>(maxval);
    }
  }
  return map;
}

}  // namespace

Heatmap Heatmap::zeros(int width, int height) {
  Heatmap map;
  map.width = width;
  map.height = height;
  map.values.assign(static_cast<std::size_t>(width) * height, 0.0);
  return map;
}

Heatmap normalize_min_max(const Heatmap& map) {
  Heatmap out = map;
  if (map.values.empty()) return out;
  auto [mn_it, mx_it] = std::minmax_element(map.values.begin(), map.values.end());
  double mn = *mn_it, mx = *mx_it;
  if (mx <= mn) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    return out;
  }
  double inv = 1.0 / (mx - mn);
  for (double& v : out.values) v = (v - mn) * inv;
  return out;
}

Heatmap load_heatmap(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in) fail(Errc::format_error, "heatmap: empty stream");
  if (magic[0] == 'H' && magic[1] == 'M') {
    char rest[2];
    in.read(rest, 2);
    if (!in || rest[0] != 'A' || rest[1] != 'P')
      fail(Errc::format_error, "heatmap: bad magic");
    std::uint32_t w = read_u32le(in);
    std::uint32_t h = read_u32le(in);
    if (!in || w == 0 || h == 0) fail(Errc::format_error, "heatmap: bad dimensions");
    Heatmap map;
    map.width = static_cast<int>(w);
    map.height = static_cast<int>(h);
    map.values.resize(static_cast<std::size_t>(w) * h);
    for (double& v : map.values) v = static_cast<double>(read_f32le(in));
    if (!in) fail(Errc::format_error, "heatmap: truncated value data");
    return map;
  }
  if (magic[0] == 'P' && magic[1] == '2') return load_pgm(in, /*binary=*/false);
  if (magic[0] == 'P' && magic[1] == '5') return load_pgm(in, /*binary=*/true);
  fail(Errc::format_error, "heatmap: unknown magic");
}

Heatmap load_heatmap_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open " + path.string());
  return load_heatmap(f);
}

void save_heatmap(std::ostream& out, const Heatmap& map) {
  out.write("HMAP", 4);
  write_u32le(out, static_cast<std::uint32_t>(map.width));
  write_u32le(out, static_cast<std::uint32_t>(map.height));
  for (double v : map.values) write_f32le(out, static_cast<float>(v));
  if (!out) fail(Errc::io_error, "heatmap: write failed");
}

void save_heatmap_file(const std::filesystem::path& path, const Heatmap& map) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  save_heatmap(f, map);
}

}  // namespace fasemcom

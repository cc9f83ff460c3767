#pragma once

#include <cstdint>

namespace fasemcom {

/// splitmix64 finalizer; good avalanche, cheap.
std::uint64_t mix64(std::uint64_t x);

/// Stream keys for counter-based, order-independent random streams.
/// derive_key(seed, trial, patch) identifies one patch of one Monte-Carlo
/// trial; any draw order across (trial, patch) cells gives identical
/// results.
std::uint64_t derive_key(std::uint64_t a);
std::uint64_t derive_key(std::uint64_t a, std::uint64_t b);
std::uint64_t derive_key(std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Deterministic splitmix64 stream. All distributions are implemented
/// here rather than taken from <random> so that sequences are identical
/// across standard libraries and platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double();

  /// Standard normal via Box-Muller (two uniforms per call).
  double next_gauss();

  /// Gamma(shape, scale) via Marsaglia-Tsang squeeze; shape < 1 handled
  /// with the Gamma(shape+1) boost. Requires shape > 0, scale > 0.
  double next_gamma(double shape, double scale);

 private:
  std::uint64_t state_;
};

}  // namespace fasemcom

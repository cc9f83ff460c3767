#include "fasemcom/rng.hpp"

#include <cmath>

#include "fasemcom/errors.hpp"

namespace fasemcom {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t derive_key(std::uint64_t a) { return mix64(a + kGolden); }

std::uint64_t derive_key(std::uint64_t a, std::uint64_t b) {
  return mix64(derive_key(a) ^ (b + kGolden));
}

std::uint64_t derive_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(derive_key(a, b) ^ (c + kGolden));
}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gauss() {
  // Box-Muller; u1 shifted away from zero so the log is finite.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

double RngStream::next_gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    fail(Errc::invalid_argument, "gamma parameters must be positive");

  // Marsaglia-Tsang (2000). For shape < 1 draw Gamma(shape+1) and apply
  // the U^(1/shape) boost.
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    const double u = 1.0 - next_double();  // (0, 1]
    boost = std::pow(u, 1.0 / a);
    a += 1.0;
  }

  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_gauss();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - next_double();  // (0, 1]
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v * scale;
  }
}

}  // namespace fasemcom

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fasemcom/channel.hpp"
#include "fasemcom/errors.hpp"

using namespace fasemcom;

namespace {

ChannelConfig no_fading_config(double snr_db, std::uint64_t seed) {
  ChannelConfig cfg;
  cfg.m_f = 1e6;
  cfg.m_s = 1e6;
  cfg.snr_db = snr_db;
  cfg.seed = seed;
  return cfg;
}

PatchPowerPlan uniform_plan(int n, double p_total) {
  return allocate_power(std::vector<int>(n, 1), 0.0, p_total);
}

}  // namespace

TEST_CASE("config validation") {
  ChannelConfig cfg;
  CHECK_NOTHROW(validate_channel_config(cfg));
  cfg.m_s = 1.0;
  CHECK_THROWS_AS(validate_channel_config(cfg), Error);
  cfg = ChannelConfig{};
  cfg.bits_per_dim = 1;
  CHECK_THROWS_AS(validate_channel_config(cfg), Error);
  cfg = ChannelConfig{};
  cfg.m_f = 0.0;
  CHECK_THROWS_AS(validate_channel_config(cfg), Error);
}

TEST_CASE("fading stream is reproducible") {
  ChannelConfig cfg;  // m_f = 5, m_s = 4
  RngStream a(derive_key(42, 0, 0));
  RngStream b(derive_key(42, 0, 0));
  for (int i = 0; i < 64; ++i)
    CHECK(sample_fading_gain(cfg, a) == sample_fading_gain(cfg, b));

  RngStream other(derive_key(42, 0, 1));
  bool any_different = false;
  RngStream c(derive_key(42, 0, 0));
  for (int i = 0; i < 8; ++i)
    any_different |= sample_fading_gain(cfg, c) != sample_fading_gain(cfg, other);
  CHECK(any_different);
}

TEST_CASE("fading gain mean is one across parameter choices") {
  for (auto [m_f, m_s] : {std::pair{0.5, 1.5}, {5.0, 4.0}, {2.0, 8.0}}) {
    ChannelConfig cfg;
    cfg.m_f = m_f;
    cfg.m_s = m_s;
    RngStream rng(derive_key(7, std::uint64_t(m_f * 2), std::uint64_t(m_s * 2)));
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += sample_fading_gain(cfg, rng);
    CHECK(std::abs(sum / n - 1.0) < 0.01);
  }
}

TEST_CASE("quantizer endpoints and mid-rise bound") {
  const PatchGrid grid = make_grid(2, 1);
  FeatureTensor t;
  t.grid = grid;
  t.dims_per_patch = 1;
  t.v_max = 1.0;
  t.values = {1.0, -1.0, 0.0, 0.5};

  const QuantizedFeatures q = quantize_features(t, 8);
  CHECK(q.codes[0] == 255);
  CHECK(q.codes[1] == 0);
  CHECK(q.codes[2] == 128);
  CHECK(std::abs(dequantize_code(q.codes[2], 8, 1.0)) <= 1.0 / 256.0);

  for (std::size_t i = 0; i < t.values.size(); ++i)
    CHECK(std::abs(t.values[i] - dequantize_code(q.codes[i], 8, 1.0)) <= 1.0 / 128.0);

  t.values[0] = std::nan("");
  CHECK_THROWS_WITH_AS(static_cast<void>(quantize_features(t, 8)),
                       doctest::Contains("NonFiniteValue"), Error);
  t.values[0] = 1.0;
  CHECK_THROWS_AS(static_cast<void>(quantize_features(t, 1)), Error);
  CHECK_THROWS_AS(static_cast<void>(quantize_features(t, 17)), Error);
}

TEST_CASE("round trip stays within the quantizer resolution") {
  const PatchGrid grid = make_grid(8, 2);
  const FeatureTensor t = synthesize_features(grid, 32, 12345);
  for (int bits : {2, 4, 8, 12, 16}) {
    const QuantizedFeatures q = quantize_features(t, bits);
    const double bound = t.v_max / double(1u << (bits - 1));
    for (std::size_t i = 0; i < t.values.size(); ++i)
      CHECK(std::abs(t.values[i] - dequantize_code(q.codes[i], bits, q.v_max)) <= bound);
  }
}

TEST_CASE("bitstream is MSB-first, patch-major") {
  QuantizedFeatures q;
  q.bits_per_dim = 2;
  q.v_max = 1.0;
  q.codes = {0b10, 0b01, 0b11, 0b00};
  const auto bytes = to_bitstream(q);
  REQUIRE(bytes.size() == 1);
  CHECK(bytes[0] == 0b10011100);
}

TEST_CASE("per-bit SNR follows the power ratio exactly") {
  PatchPowerPlan plan = uniform_plan(4, 40.0);
  plan.powers = {4.0, 16.0, 8.0, 12.0};  // sums to p_total
  ChannelConfig cfg;
  cfg.snr_db = 10.0;
  const double g1 = per_bit_snr(plan, cfg, 0, 1.0);
  const double g2 = per_bit_snr(plan, cfg, 1, 1.0);
  CHECK(g2 / g1 == 4.0);
  CHECK(10.0 * std::log10(g2 / g1) == doctest::Approx(6.0205999132796239).epsilon(1e-12));
}

TEST_CASE("transmission at extreme SNR is error-free") {
  const PatchGrid grid = make_grid(8, 2);
  const FeatureTensor t = synthesize_features(grid, 16, 99);
  const ChannelConfig cfg = no_fading_config(60.0, 5);
  const TransmitResult res = transmit(t, uniform_plan(grid.patch_count, 30.0), cfg, 4);

  CHECK(res.report.overall_ber == 0.0);
  for (auto e : res.report.per_patch_bit_errors) CHECK(e == 0);

  const QuantizedFeatures q = quantize_features(t, cfg.bits_per_dim);
  for (std::size_t i = 0; i < t.values.size(); ++i)
    CHECK(res.reconstructed.values[i] ==
          dequantize_code(q.codes[i], cfg.bits_per_dim, q.v_max));
}

TEST_CASE("boosted patches beat starved patches in every batch") {
  const PatchGrid grid = make_grid(2, 1);  // levels {1,5} on a 4-patch strip
  const FeatureTensor t = synthesize_features(grid, 64, 4);
  const PatchPowerPlan plan = allocate_power(std::vector<int>{1, 5, 1, 5}, 1.0, 30.0);
  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
    ChannelConfig cfg;
    cfg.snr_db = 8.0;
    cfg.seed = seed;
    const TransmitResult res = transmit(t, plan, cfg, 200);  // >= 1e5 bits per patch
    CHECK(res.report.per_patch_bits[0] == 200 * 64 * 8);
    CHECK(res.report.per_patch_ber[1] < res.report.per_patch_ber[0]);
    CHECK(res.report.per_patch_ber[3] < res.report.per_patch_ber[2]);
  }
}

TEST_CASE("BER is nonincreasing in SNR") {
  const PatchGrid grid = make_grid(8, 1);  // 64 patches
  const FeatureTensor t = synthesize_features(grid, 64, 17);
  const PatchPowerPlan plan = uniform_plan(grid.patch_count, 30.0);
  double prev = 1.0;
  for (double snr_db : {0.0, 4.0, 8.0, 12.0, 16.0}) {
    ChannelConfig cfg;  // fading on: m_f=5, m_s=4
    cfg.snr_db = snr_db;
    cfg.seed = 2024;
    const TransmitResult res = transmit(t, plan, cfg, 32);  // ~1e6 bits per point
    CHECK(res.report.overall_ber <= prev);
    prev = res.report.overall_ber;
  }
  CHECK(prev < 0.02);  // the 16 dB point must have come down substantially
}

TEST_CASE("reports are deterministic and conserve bit counts") {
  const PatchGrid grid = make_grid(4, 1);
  const FeatureTensor t = synthesize_features(grid, 24, 8);
  ChannelConfig cfg;
  cfg.snr_db = 6.0;
  cfg.seed = 77;
  cfg.bits_per_dim = 6;
  const PatchPowerPlan plan = allocate_power(std::vector<int>(16, 2), 1.0, 30.0);

  const TransmitResult a = transmit(t, plan, cfg, 9);
  const TransmitResult b = transmit(t, plan, cfg, 9);
  CHECK(a.report.per_patch_bit_errors == b.report.per_patch_bit_errors);
  CHECK(a.report.overall_ber == b.report.overall_ber);
  CHECK(a.report.per_patch_mse == b.report.per_patch_mse);
  CHECK(a.reconstructed.values == b.reconstructed.values);

  const std::int64_t total =
      std::accumulate(a.report.per_patch_bits.begin(), a.report.per_patch_bits.end(),
                      std::int64_t(0));
  CHECK(total == std::int64_t(16) * 24 * 6 * 9);

  // The per-trial observer must see exactly what the report accumulates.
  std::vector<std::int64_t> observed(16, 0);
  int calls = 0;
  transmit(t, plan, cfg, 9, [&](int, std::span<const std::int64_t> errs) {
    ++calls;
    for (std::size_t i = 0; i < errs.size(); ++i) observed[i] += errs[i];
  });
  CHECK(calls == 9);
  CHECK(observed == a.report.per_patch_bit_errors);
}

TEST_CASE("grid mismatch is rejected") {
  const FeatureTensor t = synthesize_features(make_grid(4, 1), 8, 1);
  ChannelConfig cfg;
  CHECK_THROWS_WITH_AS(static_cast<void>(transmit(t, uniform_plan(9, 30.0), cfg, 1)),
                       doctest::Contains("GridMismatch"), Error);
}

TEST_CASE("distortion summaries") {
  const PatchGrid grid = make_grid(2, 1);
  FeatureTensor a;
  a.grid = grid;
  a.dims_per_patch = 2;
  a.v_max = 1.0;
  a.values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  FeatureTensor b = a;

  PatchWeights w;
  w.grid = grid;
  w.raw = {0.0, 1.0, 1.0, 0.0};

  const DistortionSummary same = distortion(a, b, w);
  CHECK(same.overall_mse == 0.0);
  CHECK(same.weighted_mse == 0.0);

  b.values[0] += 0.5;  // error confined to a zero-weight patch
  b.values[7] -= 0.25;
  const DistortionSummary skewed = distortion(a, b, w);
  CHECK(skewed.overall_mse > 0.0);
  CHECK(skewed.weighted_mse == 0.0);

  PatchWeights uniform = w;
  uniform.raw = {1.0, 1.0, 1.0, 1.0};
  const DistortionSummary u = distortion(a, b, uniform);
  CHECK(u.weighted_mse == doctest::Approx(u.overall_mse).epsilon(1e-12));

  FeatureTensor wrong = a;
  wrong.values.resize(4);
  CHECK_THROWS_WITH_AS(static_cast<void>(distortion(a, wrong, w)),
                       doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("fading moments match the composite model") {
  // Sample mean of 1e6 draws at the default parameters.
  ChannelConfig cfg;
  RngStream rng(derive_key(123));
  double sum = 0.0, sum_sq = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double g = sample_fading_gain(cfg, rng);
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 1.0) < 0.01);
  // E[g^2] = omega^2 (1 + 1/m_f) m_s^2 / ((m_s-1)(m_s-2)) = 1.8 for (5,4).
  CHECK(sum_sq / n == doctest::Approx(1.8).epsilon(0.03));
}

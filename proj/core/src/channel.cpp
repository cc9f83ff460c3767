#include "fasemcom/channel.hpp"

#include <algorithm>
#include <cmath>

#include "fasemcom/errors.hpp"

namespace fasemcom {

void validate_channel_config(const ChannelConfig& cfg) {
  if (!(cfg.m_f > 0.0)) fail(Errc::config_error, "m_f must be positive");
  if (!(cfg.m_s > 1.0))
    fail(Errc::config_error, "m_s must exceed 1 (finite shadowing mean)");
  if (!(cfg.p_total > 0.0)) fail(Errc::config_error, "p_total must be positive");
  if (cfg.bits_per_dim < 2 || cfg.bits_per_dim > 16)
    fail(Errc::config_error, "bits_per_dim must lie in [2,16]");
  if (cfg.dims_per_patch < 1) fail(Errc::config_error, "dims_per_patch must be >= 1");
}

double sample_fading_gain(const ChannelConfig& cfg, RngStream& rng) {
  // Nakagami-m multipath power over inverse-Nakagami-m shadowing power.
  // omega = (m_s-1)/m_s compensates E[1/y] = m_s/(m_s-1), so E[gain] = 1.
  const double omega = (cfg.m_s - 1.0) / cfg.m_s;
  const double x = rng.next_gamma(cfg.m_f, omega / cfg.m_f);
  const double y = rng.next_gamma(cfg.m_s, 1.0 / cfg.m_s);
  return x / y;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double per_bit_snr(const PatchPowerPlan& plan, const ChannelConfig& cfg,
                   std::size_t patch, double gain) {
  const double gamma_bar = std::pow(10.0, cfg.snr_db / 10.0);
  const double uniform_share = plan.p_total / double(plan.powers.size());
  return gamma_bar * (plan.powers[patch] / uniform_share) * gain;
}

TransmitResult transmit(const FeatureTensor& tensor, const PatchPowerPlan& plan,
                        const ChannelConfig& cfg, int trials,
                        const TrialObserver& observer) {
  validate_channel_config(cfg);
  if (trials < 1) fail(Errc::invalid_argument, "trials must be >= 1");
  const int n = tensor.grid.patch_count;
  if (int(plan.powers.size()) != n)
    fail(Errc::grid_mismatch, "plan size " + std::to_string(plan.powers.size()) +
                                  " != tensor patch count " + std::to_string(n));
  if (plan.grid.patch_count > 0 && !(plan.grid == tensor.grid))
    fail(Errc::grid_mismatch, "plan and tensor grids differ");

  const int d = tensor.dims_per_patch;
  const int b = cfg.bits_per_dim;
  const QuantizedFeatures q = quantize_features(tensor, b);

  TransmitResult result;
  result.reconstructed = tensor;  // shape and v_max; values overwritten below
  TransmissionReport& report = result.report;
  report.trials = trials;
  report.per_patch_bits.assign(n, std::int64_t(d) * b * trials);
  report.per_patch_bit_errors.assign(n, 0);
  report.per_patch_mse.assign(n, 0.0);

  std::vector<std::int64_t> trial_errors(observer ? n : 0);

  for (int trial = 0; trial < trials; ++trial) {
    if (observer) std::fill(trial_errors.begin(), trial_errors.end(), 0);
    for (int patch = 0; patch < n; ++patch) {
      RngStream rng(derive_key(cfg.seed, std::uint64_t(trial), std::uint64_t(patch)));
      const double gain = sample_fading_gain(cfg, rng);
      const double snr = per_bit_snr(plan, cfg, std::size_t(patch), gain);
      const double p_flip = q_function(std::sqrt(2.0 * snr));

      std::int64_t errors = 0;
      double sq_err = 0.0;
      const std::size_t base = std::size_t(patch) * d;
      for (int dim = 0; dim < d; ++dim) {
        std::uint32_t code = q.codes[base + dim];
        if (p_flip > 0.0) {
          for (int bit = b - 1; bit >= 0; --bit) {
            if (rng.next_double() < p_flip) {
              code ^= (1u << bit);
              ++errors;
            }
          }
        }
        const double rec = dequantize_code(code, b, q.v_max);
        const double diff = tensor.values[base + dim] - rec;
        sq_err += diff * diff;
        if (trial == 0) result.reconstructed.values[base + dim] = rec;
      }
      report.per_patch_bit_errors[patch] += errors;
      report.per_patch_mse[patch] += sq_err;
      if (observer) trial_errors[patch] = errors;
    }
    if (observer) observer(trial, trial_errors);
  }

  report.per_patch_ber.resize(n);
  std::int64_t total_errors = 0;
  double total_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    report.per_patch_ber[i] =
        double(report.per_patch_bit_errors[i]) / double(report.per_patch_bits[i]);
    report.per_patch_mse[i] /= double(d) * trials;
    total_errors += report.per_patch_bit_errors[i];
    total_sq += report.per_patch_mse[i];
  }
  report.overall_ber = double(total_errors) / (double(n) * d * b * trials);
  report.overall_mse = total_sq / double(n);
  return result;
}

DistortionSummary distortion(const FeatureTensor& original,
                             const FeatureTensor& reconstructed,
                             const PatchWeights& weights) {
  if (original.values.size() != reconstructed.values.size() ||
      original.dims_per_patch != reconstructed.dims_per_patch)
    fail(Errc::shape_mismatch, "distortion of tensors with different shapes");
  const int n = original.grid.patch_count;
  if (int(weights.raw.size()) != n)
    fail(Errc::shape_mismatch, "weights do not cover the tensor's patches");

  const int d = original.dims_per_patch;
  DistortionSummary out;
  double weighted_num = 0.0, weight_sum = 0.0;
  for (int patch = 0; patch < n; ++patch) {
    double mse = 0.0;
    const std::size_t base = std::size_t(patch) * d;
    for (int dim = 0; dim < d; ++dim) {
      const double diff = original.values[base + dim] - reconstructed.values[base + dim];
      mse += diff * diff;
    }
    mse /= double(d);
    out.overall_mse += mse;
    weighted_num += weights.raw[patch] * mse;
    weight_sum += weights.raw[patch];
  }
  out.overall_mse /= double(n);
  // All-zero weights carry no importance information; fall back to uniform.
  out.weighted_mse = weight_sum > 0.0 ? weighted_num / weight_sum : out.overall_mse;
  return out;
}

}  // namespace fasemcom

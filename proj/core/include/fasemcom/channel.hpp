#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fasemcom/attention.hpp"
#include "fasemcom/feature_tensor.hpp"
#include "fasemcom/power.hpp"
#include "fasemcom/rng.hpp"

namespace fasemcom {

/// Composite-fading channel parameters. snr_db is the average per-bit SNR
/// a patch would see under the uniform power split (the unit-mean fading
/// normalization pins this reference down).
struct ChannelConfig {
  double m_f = 5.0;   // multipath (Nakagami-m) parameter, > 0
  double m_s = 4.0;   // shadowing (inverse Nakagami-m) parameter, > 1
  double snr_db = 10.0;
  double p_total = 30.0;  // watts
  int bits_per_dim = 8;
  int dims_per_patch = 64;
  std::uint64_t seed = 0;
};

/// Throws config_error when a parameter is out of range.
void validate_channel_config(const ChannelConfig& cfg);

/// One power gain g = x/y with x ~ Gamma(m_f, omega/m_f),
/// y ~ Gamma(m_s, 1/m_s) and omega = (m_s-1)/m_s, which makes E[g] = 1.
double sample_fading_gain(const ChannelConfig& cfg, RngStream& rng);

/// Gaussian tail probability Q(x), via erfc.
double q_function(double x);

/// gamma_i = 10^(snr_db/10) * (powers[i] / (p_total/N)) * gain.
double per_bit_snr(const PatchPowerPlan& plan, const ChannelConfig& cfg,
                   std::size_t patch, double gain);

struct TransmissionReport {
  std::vector<std::int64_t> per_patch_bits;
  std::vector<std::int64_t> per_patch_bit_errors;
  std::vector<double> per_patch_ber;
  std::vector<double> per_patch_mse;  // mean over dims and trials
  double overall_ber = 0.0;           // bit-weighted
  double overall_mse = 0.0;           // dimension-weighted
  int trials = 0;
};

/// Called once per trial with that trial's per-patch bit-error counts.
using TrialObserver =
    std::function<void(int trial, std::span<const std::int64_t> per_patch_bit_errors)>;

struct TransmitResult {
  TransmissionReport report;
  FeatureTensor reconstructed;  // the trial-0 realization
};

/// Block fading: one gain per patch per trial, streams keyed by
/// (seed, trial, patch); each bit flips independently with probability
/// Q(sqrt(2*gamma_i)) (coherent binary antipodal signaling). Identical
/// inputs give identical reports, in any evaluation order.
TransmitResult transmit(const FeatureTensor& tensor, const PatchPowerPlan& plan,
                        const ChannelConfig& cfg, int trials,
                        const TrialObserver& observer = {});

struct DistortionSummary {
  double overall_mse = 0.0;
  double weighted_mse = 0.0;  // importance-weighted by raw patch weights
};

DistortionSummary distortion(const FeatureTensor& original,
                             const FeatureTensor& reconstructed,
                             const PatchWeights& weights);

}  // namespace fasemcom

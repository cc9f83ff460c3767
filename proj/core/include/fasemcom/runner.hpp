#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fasemcom/attention.hpp"
#include "fasemcom/channel.hpp"
#include "fasemcom/semantic_match.hpp"

namespace fasemcom {

/// fa: fused attention at the configured alpha; avg: uniform power,
/// attention bypassed; obj_only / sub_only: alpha forced to 1 / 0.
enum class Mode { fa, avg, obj_only, sub_only };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);  // throws config_error

struct ExperimentConfig {
  std::string question;
  std::filesystem::path image_path;      // optional; empty means synthetic
  ImageSize image_size{672, 672};        // used when image_path is empty
  std::filesystem::path detections_path;
  std::filesystem::path heatmap_path;    // optional
  std::filesystem::path embedding_path;
  std::filesystem::path features_path;        // optional; empty = synthesize
  std::filesystem::path features_path_slice;  // optional
  std::optional<ObjectiveProvider> objective_provider;  // nullopt = auto
  double alpha = 0.5;
  std::vector<double> beta_list{1.0};
  std::vector<double> snr_db_list{10.0};
  int level_count = 5;
  ChannelConfig channel;
  PatchGrid grid;  // defaults to 336/14
  std::vector<Mode> modes{Mode::fa};
  int trials = 32;
  double similarity_threshold = kDefaultSimilarityThreshold;
  int keyword_top_k = 5;
  std::filesystem::path output_dir;
  bool write_plans = true;
  bool write_reconstructions = true;
};

/// Parses the JSON config document; relative paths resolve against
/// base_dir. Missing output_dir falls back to $FASEMCOM_OUTPUT_DIR, then
/// "./out". Throws config_error on malformed or out-of-range fields.
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& config_path);

/// Everything that is independent of the (mode, beta, snr) grid cell:
/// keyword extraction, matching, slicing, heatmaps, per-tile subjective
/// levels (the importance mask source) and feature tensors.
struct TileSetup {
  std::string name;  // "base" or "slice"
  Box region;        // in source-image pixels
  PatchWeights subjective;  // quantized subjective-attention weights
  FeatureTensor features;
  std::uint64_t tile_seed = 0;
};

struct PipelineSetup {
  std::vector<KeywordCandidate> keywords;
  std::optional<MatchResult> match;  // nullopt after a below-threshold match
  std::optional<SliceSpec> slice;
  Heatmap h_obj;
  Heatmap h_sub;
  std::vector<TileSetup> tiles;
  ImageSize image_size;
};

PipelineSetup prepare_pipeline(const ExperimentConfig& cfg);

/// Per-mode patch weights for one tile. avg bypasses attention: raw
/// weights and levels are all one (uniform power for any beta).
PatchWeights mode_weights(const Heatmap& h_obj, const Heatmap& h_sub, Mode mode,
                          double alpha, const Box& region, const PatchGrid& grid,
                          int level_count);

struct RunRecord {
  Mode mode = Mode::fa;
  std::optional<double> alpha;  // empty for avg (no fusion applies)
  double beta = 0.0;
  double snr_db = 0.0;
  double overall_ber = 0.0;
  double weighted_mse = 0.0;
  double overall_mse = 0.0;
  double important_patch_ber = 0.0;
  std::uint64_t seed = 0;
};

/// Runs every (mode, beta, snr) cell, writes per-cell BER rasters, power
/// plans and reconstructed tensors under cfg.output_dir, then runs.csv.
/// A below-threshold match degrades to an empty subjective map (warning on
/// stderr), never an error.
std::vector<RunRecord> run_pipeline(const ExperimentConfig& cfg);

/// Writes runs.csv (one row per record, stable order). Throws io_error on
/// empty input or filesystem failure.
void emit_reports(std::span<const RunRecord> records, const std::filesystem::path& dir);

}  // namespace fasemcom

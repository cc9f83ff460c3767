#include "fasemcom/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fasemcom/errors.hpp"
#include "fasemcom/power.hpp"

namespace fasemcom {

namespace {

std::string fmt_full(double v) {  // round-trippable, deterministic
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {  // for filenames: 0.5 -> "0.5", 1 -> "1"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string cell_suffix(Mode mode, double beta, double snr_db) {
  return std::string(mode_name(mode)) + "_b" + fmt_short(beta) + "_s" + fmt_short(snr_db);
}

ObjectiveProvider parse_provider(std::string_view name) {
  if (name == "file") return ObjectiveProvider::file;
  if (name == "spectral_residual") return ObjectiveProvider::spectral_residual;
  if (name == "center_prior") return ObjectiveProvider::center_prior;
  fail(Errc::config_error, "unknown objective_provider '" + std::string(name) + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::fa: return "fa";
    case Mode::avg: return "avg";
    case Mode::obj_only: return "obj_only";
    case Mode::sub_only: return "sub_only";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  if (name == "fa") return Mode::fa;
  if (name == "avg") return Mode::avg;
  if (name == "obj_only") return Mode::obj_only;
  if (name == "sub_only") return Mode::sub_only;
  fail(Errc::config_error, "unknown mode '" + std::string(name) + "'");
}

ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::config_error, std::string("config: ") + e.what());
  }

  ExperimentConfig cfg;
  cfg.grid = make_grid(336, 14);
  try {
    cfg.question = doc.at("question").get<std::string>();
    if (cfg.question.empty()) fail(Errc::config_error, "question must be nonempty");

    cfg.detections_path = resolve(base_dir, doc.at("detections_path").get<std::string>());
    cfg.embedding_path = resolve(base_dir, doc.at("embedding_path").get<std::string>());
    if (doc.contains("image_path") && !doc["image_path"].is_null())
      cfg.image_path = resolve(base_dir, doc["image_path"].get<std::string>());
    if (doc.contains("heatmap_path") && !doc["heatmap_path"].is_null())
      cfg.heatmap_path = resolve(base_dir, doc["heatmap_path"].get<std::string>());
    if (doc.contains("features_path") && !doc["features_path"].is_null())
      cfg.features_path = resolve(base_dir, doc["features_path"].get<std::string>());
    if (doc.contains("features_path_slice") && !doc["features_path_slice"].is_null())
      cfg.features_path_slice =
          resolve(base_dir, doc["features_path_slice"].get<std::string>());

    if (doc.contains("image_size")) {
      const auto& sz = doc["image_size"];
      if (!sz.is_array() || sz.size() != 2)
        fail(Errc::config_error, "image_size must be [width, height]");
      cfg.image_size = {sz[0].get<int>(), sz[1].get<int>()};
      if (cfg.image_size.first <= 0 || cfg.image_size.second <= 0)
        fail(Errc::config_error, "image_size must be positive");
    }

    if (doc.contains("objective_provider")) {
      const std::string p = doc["objective_provider"].get<std::string>();
      if (p != "auto") cfg.objective_provider = parse_provider(p);
    }

    cfg.alpha = doc.value("alpha", 0.5);
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
      fail(Errc::config_error, "alpha must lie in [0,1]");

    if (doc.contains("beta_list"))
      cfg.beta_list = doc["beta_list"].get<std::vector<double>>();
    if (doc.contains("snr_db_list"))
      cfg.snr_db_list = doc["snr_db_list"].get<std::vector<double>>();
    if (cfg.beta_list.empty()) fail(Errc::config_error, "beta_list must be nonempty");
    if (cfg.snr_db_list.empty()) fail(Errc::config_error, "snr_db_list must be nonempty");
    for (double b : cfg.beta_list)
      if (!(b >= 0.0)) fail(Errc::config_error, "beta values must be >= 0");

    cfg.level_count = doc.contains("levels") ? doc["levels"].get<int>()
                                             : doc.value("L", 5);
    if (cfg.level_count < 2) fail(Errc::config_error, "levels must be >= 2");

    if (doc.contains("grid")) {
      const auto& g = doc["grid"];
      cfg.grid = make_grid(g.value("tile_resolution", 336), g.value("patch_size", 14));
    }

    if (doc.contains("channel")) {
      const auto& ch = doc["channel"];
      cfg.channel.m_f = ch.value("m_f", cfg.channel.m_f);
      cfg.channel.m_s = ch.value("m_s", cfg.channel.m_s);
      cfg.channel.p_total = ch.value("p_total", cfg.channel.p_total);
      cfg.channel.bits_per_dim = ch.value("bits_per_dim", cfg.channel.bits_per_dim);
      cfg.channel.dims_per_patch = ch.value("dims_per_patch", cfg.channel.dims_per_patch);
      cfg.channel.seed = ch.value("seed", cfg.channel.seed);
    }
    validate_channel_config(cfg.channel);

    if (doc.contains("modes")) {
      cfg.modes.clear();
      for (const auto& m : doc["modes"]) cfg.modes.push_back(parse_mode(m.get<std::string>()));
    } else if (doc.contains("mode")) {
      cfg.modes = {parse_mode(doc["mode"].get<std::string>())};
    }
    if (cfg.modes.empty()) fail(Errc::config_error, "modes must be nonempty");

    cfg.trials = doc.value("trials", 32);
    if (cfg.trials < 1) fail(Errc::config_error, "trials must be >= 1");

    cfg.similarity_threshold = doc.value("similarity_threshold", kDefaultSimilarityThreshold);
    cfg.keyword_top_k = doc.value("keyword_top_k", 5);
    if (cfg.keyword_top_k < 1) fail(Errc::config_error, "keyword_top_k must be >= 1");

    cfg.write_plans = doc.value("write_plans", true);
    cfg.write_reconstructions = doc.value("write_reconstructions", true);

    if (doc.contains("output_dir")) {
      cfg.output_dir = resolve(base_dir, doc["output_dir"].get<std::string>());
    } else if (const char* env = std::getenv("FASEMCOM_OUTPUT_DIR"); env && *env) {
      cfg.output_dir = env;
    } else {
      cfg.output_dir = "out";
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::config_error, std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& config_path) {
  std::ifstream f(config_path);
  if (!f) fail(Errc::io_error, "cannot open config " + config_path.string());
  std::ostringstream text;
  text << f.rdbuf();
  return parse_experiment_config(text.str(), config_path.parent_path());
}

PatchWeights mode_weights(const Heatmap& h_obj, const Heatmap& h_sub, Mode mode,
                          double alpha, const Box& region, const PatchGrid& grid,
                          int level_count) {
  if (mode == Mode::avg) {
    PatchWeights w;
    w.grid = grid;
    w.raw.assign(std::size_t(grid.patch_count), 1.0);
    w.levels.assign(std::size_t(grid.patch_count), 1);
    w.level_count = level_count;
    return w;
  }
  double effective = alpha;
  if (mode == Mode::obj_only) effective = 1.0;
  if (mode == Mode::sub_only) effective = 0.0;
  const Heatmap fused = fuse(h_obj, h_sub, effective);
  return quantize_levels(patch_weights(fused, region, grid), level_count);
}

PipelineSetup prepare_pipeline(const ExperimentConfig& cfg) {
  PipelineSetup setup;

  const EmbeddingTable table = load_embeddings_file(cfg.embedding_path);
  const std::vector<Detection> detections = load_detections_file(cfg.detections_path);

  Heatmap image;
  if (!cfg.image_path.empty()) {
    image = load_heatmap_file(cfg.image_path);
    setup.image_size = {image.width, image.height};
  } else {
    setup.image_size = cfg.image_size;
    image = Heatmap::zeros(cfg.image_size.first, cfg.image_size.second);
  }
  validate_detections(detections, setup.image_size);

  setup.keywords = extract_keywords(cfg.question, cfg.keyword_top_k);
  setup.match = best_match(setup.keywords, detections, table, cfg.similarity_threshold);

  std::vector<Box> matched_boxes;
  if (setup.match) {
    matched_boxes = setup.match->matched_boxes;
    setup.slice = select_slice(setup.image_size, matched_boxes, cfg.grid.tile_resolution);
  }

  ObjectiveProvider provider;
  if (cfg.objective_provider) {
    provider = *cfg.objective_provider;
  } else if (!cfg.heatmap_path.empty()) {
    provider = ObjectiveProvider::file;
  } else if (!cfg.image_path.empty()) {
    provider = ObjectiveProvider::spectral_residual;
  } else {
    provider = ObjectiveProvider::center_prior;
  }
  if (provider == ObjectiveProvider::file) {
    if (cfg.heatmap_path.empty())
      fail(Errc::config_error, "objective_provider 'file' needs heatmap_path");
    const Heatmap file_map = load_heatmap_file(cfg.heatmap_path);
    setup.h_obj = objective_heatmap(image, provider, &file_map);
  } else {
    setup.h_obj = objective_heatmap(image, provider);
  }
  setup.h_sub = subjective_heatmap(setup.image_size, matched_boxes);

  auto make_tile = [&](const std::string& name, const Box& region, std::uint64_t index,
                       const std::filesystem::path& features_path) {
    TileSetup tile;
    tile.name = name;
    tile.region = region;
    tile.subjective =
        quantize_levels(patch_weights(setup.h_sub, region, cfg.grid), cfg.level_count);
    tile.tile_seed = derive_key(cfg.channel.seed, index);
    tile.features = features_path.empty()
                        ? synthesize_features(cfg.grid, cfg.channel.dims_per_patch,
                                              tile.tile_seed)
                        : load_feature_tensor_file(features_path, cfg.grid);
    return tile;
  };

  const Box whole{0, 0, setup.image_size.first, setup.image_size.second};
  setup.tiles.push_back(make_tile("base", whole, 0, cfg.features_path));
  if (setup.slice)
    setup.tiles.push_back(make_tile("slice", setup.slice->crop_box, 1,
                                    cfg.features_path_slice));
  return setup;
}

namespace {

struct CellMetrics {
  std::int64_t bits = 0, errors = 0;
  std::int64_t important_bits = 0, important_errors = 0;
  double mse_sum = 0.0;  // per-patch mse accumulated
  double weighted_num = 0.0, weight_sum = 0.0;
  int patches = 0;
};

void write_plan_json(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, const PatchPowerPlan*>>& plans) {
  nlohmann::ordered_json doc;
  for (const auto& [name, plan] : plans) {
    nlohmann::ordered_json p;
    p["beta"] = plan->beta;
    p["p_total"] = plan->p_total;
    p["levels"] = plan->levels;
    p["powers"] = plan->powers;
    doc[name] = std::move(p);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  f << doc.dump(1) << '\n';
}

}  // namespace

std::vector<RunRecord> run_pipeline(const ExperimentConfig& cfg) {
  const PipelineSetup setup = prepare_pipeline(cfg);

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) fail(Errc::io_error, "cannot create output dir " + cfg.output_dir.string());

  if (!setup.match) {
    std::cerr << "warning: no semantic match above threshold "
              << cfg.similarity_threshold
              << "; subjective attention is empty, base tile only\n";
    std::ofstream warn(cfg.output_dir / "warnings.log", std::ios::binary);
    warn << "no semantic match above threshold; subjective attention empty\n";
  }

  const int half_level = (cfg.level_count + 1) / 2;  // ceil(L/2)
  std::vector<RunRecord> records;

  for (Mode mode : cfg.modes) {
    // Attention weights per tile are (mode, alpha)-dependent but constant
    // across the (beta, snr) sweep axes.
    std::vector<PatchWeights> tile_weights;
    for (const TileSetup& tile : setup.tiles)
      tile_weights.push_back(mode_weights(setup.h_obj, setup.h_sub, mode, cfg.alpha,
                                          tile.region, cfg.grid, cfg.level_count));

    for (double beta : cfg.beta_list) {
      for (double snr_db : cfg.snr_db_list) {
        const std::string suffix = cell_suffix(mode, beta, snr_db);
        CellMetrics m;
        bool plan_is_uniform = true;
        std::vector<std::pair<std::string, PatchPowerPlan>> plans;

        for (std::size_t ti = 0; ti < setup.tiles.size(); ++ti) {
          const TileSetup& tile = setup.tiles[ti];
          const PatchWeights& weights = tile_weights[ti];

          PatchPowerPlan plan = allocate_power(weights, beta, cfg.channel.p_total);
          for (int level : plan.levels) plan_is_uniform &= level == 1;

          ChannelConfig ch = cfg.channel;
          ch.snr_db = snr_db;
          ch.seed = tile.tile_seed;
          const TransmitResult res = transmit(tile.features, plan, ch, cfg.trials);

          const int n = cfg.grid.patch_count;
          // The critical-region figure reads the base tile: there the
          // matched region is a handful of patches inside a full scene,
          // which is the unequal-protection story; the slice tile is
          // mostly matched region by construction.
          const bool base_tile = ti == 0;
          for (int i = 0; i < n; ++i) {
            m.bits += res.report.per_patch_bits[i];
            m.errors += res.report.per_patch_bit_errors[i];
            m.mse_sum += res.report.per_patch_mse[i];
            m.weighted_num += weights.raw[i] * res.report.per_patch_mse[i];
            m.weight_sum += weights.raw[i];
            if (base_tile && tile.subjective.levels[i] >= half_level) {
              m.important_bits += res.report.per_patch_bits[i];
              m.important_errors += res.report.per_patch_bit_errors[i];
            }
          }
          m.patches += n;

          Heatmap raster;
          raster.width = cfg.grid.patches_per_side;
          raster.height = cfg.grid.patches_per_side;
          raster.values = res.report.per_patch_ber;
          const std::string raster_name =
              tile.name == "base" ? "ber_" + suffix + ".hmap"
                                  : "ber_" + suffix + "_slice.hmap";
          save_heatmap_file(cfg.output_dir / raster_name, raster);

          if (cfg.write_reconstructions)
            save_feature_tensor_file(
                cfg.output_dir / ("recon_" + suffix + "_" + tile.name + ".ftns"),
                res.reconstructed);

          plans.emplace_back(tile.name, std::move(plan));
        }

        if (cfg.write_plans) {
          std::vector<std::pair<std::string, const PatchPowerPlan*>> views;
          for (const auto& [name, plan] : plans) views.emplace_back(name, &plan);
          write_plan_json(cfg.output_dir / ("plan_" + suffix + ".json"), views);
        }

        RunRecord rec;
        rec.mode = mode;
        if (mode == Mode::fa) rec.alpha = cfg.alpha;
        if (mode == Mode::obj_only) rec.alpha = 1.0;
        if (mode == Mode::sub_only) rec.alpha = 0.0;
        rec.beta = beta;
        rec.snr_db = snr_db;
        rec.overall_ber = double(m.errors) / double(m.bits);
        rec.overall_mse = m.mse_sum / double(m.patches);
        rec.weighted_mse =
            m.weight_sum > 0.0 ? m.weighted_num / m.weight_sum : rec.overall_mse;
        // A uniform plan (avg, or attention that collapsed to nothing)
        // applies no unequal protection; the overall figure is then the
        // faithful read for any patch subset. Same fallback when no patch
        // reaches the importance threshold.
        rec.important_patch_ber =
            (m.important_bits > 0 && !plan_is_uniform)
                ? double(m.important_errors) / double(m.important_bits)
                : rec.overall_ber;
        rec.seed = cfg.channel.seed;
        records.push_back(rec);
      }
    }
  }

  emit_reports(records, cfg.output_dir);
  return records;
}

void emit_reports(std::span<const RunRecord> records, const std::filesystem::path& dir) {
  if (records.empty()) fail(Errc::io_error, "emit_reports with no records");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::io_error, "cannot create output dir " + dir.string());

  std::ofstream f(dir / "runs.csv", std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open " + (dir / "runs.csv").string());
  f << "mode,alpha,beta,snr_db,overall_ber,weighted_mse,overall_mse,"
       "important_patch_ber,seed\n";
  for (const RunRecord& r : records) {
    f << mode_name(r.mode) << ',';
    if (r.alpha) f << fmt_full(*r.alpha);
    f << ',' << fmt_full(r.beta) << ',' << fmt_full(r.snr_db) << ','
      << fmt_full(r.overall_ber) << ',' << fmt_full(r.weighted_mse) << ','
      << fmt_full(r.overall_mse) << ',' << fmt_full(r.important_patch_ber) << ','
      << r.seed << '\n';
  }
  if (!f) fail(Errc::io_error, "runs.csv: write failed");
}

}  // namespace fasemcom

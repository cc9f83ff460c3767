// fasemcom: attention-weighted power allocation and fading-channel
// simulation for patch-based feature transmission.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fasemcom/errors.hpp"
#include "fasemcom/power.hpp"
#include "fasemcom/runner.hpp"

namespace {

using namespace fasemcom;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::config_error:
      return 2;
    case Errc::io_error:
    case Errc::format_error:
    case Errc::empty_table:
      return 3;
    default:
      return 4;
  }
}

int cmd_run(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const std::vector<RunRecord> records = run_pipeline(cfg);
  std::cout << records.size() << " grid cells -> " << cfg.output_dir.string() << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& betas,
              const std::vector<double>& snrs) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (!betas.empty()) cfg.beta_list = betas;
  if (!snrs.empty()) cfg.snr_db_list = snrs;
  for (double b : cfg.beta_list)
    if (!(b >= 0.0)) fail(Errc::config_error, "beta values must be >= 0");
  const std::vector<RunRecord> records = run_pipeline(cfg);
  std::cout << records.size() << " grid cells -> " << cfg.output_dir.string() << "\n";
  return 0;
}

int cmd_inspect_plan(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const PipelineSetup setup = prepare_pipeline(cfg);

  std::cout << "question: " << cfg.question << "\n";
  std::cout << "keywords:";
  for (const auto& kw : setup.keywords) std::cout << " [" << kw.text() << "]";
  std::cout << "\n";
  if (setup.match) {
    std::printf("match: '%s' via '%s' (similarity %.4f), %zu box(es)\n",
                setup.match->matched_label.c_str(), setup.match->keyword.c_str(),
                setup.match->similarity, setup.match->matched_boxes.size());
  } else {
    std::cout << "match: none above threshold " << cfg.similarity_threshold << "\n";
  }
  const int slices = setup.slice ? 1 : 0;
  std::cout << "tiles: " << setup.tiles.size() << ", visual tokens "
            << token_count(slices, cfg.grid.patch_count) << "\n";

  for (Mode mode : cfg.modes) {
    for (double beta : cfg.beta_list) {
      std::printf("\n-- mode %s, beta %g, P_total %g W --\n",
                  std::string(mode_name(mode)).c_str(), beta, cfg.channel.p_total);
      for (const TileSetup& tile : setup.tiles) {
        const PatchWeights w = mode_weights(setup.h_obj, setup.h_sub, mode, cfg.alpha,
                                            tile.region, cfg.grid, cfg.level_count);
        const PatchPowerPlan plan = allocate_power(w, beta, cfg.channel.p_total);
        std::map<int, int> histogram;
        for (int level : plan.levels) ++histogram[level];
        double lo = plan.powers[0], hi = plan.powers[0];
        for (double p : plan.powers) {
          lo = std::min(lo, p);
          hi = std::max(hi, p);
        }
        std::printf("  %-5s levels {", tile.name.c_str());
        bool first = true;
        for (const auto& [level, count] : histogram) {
          std::printf("%s%d:%d", first ? "" : ", ", level, count);
          first = false;
        }
        std::printf("}  power %.4g..%.4g W  boost %.4g\n", lo, hi, boost_ratio(plan));
      }
    }
  }
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  };

  {
    const PatchPowerPlan plan = allocate_power(std::vector<int>{1, 2, 2}, 1.0, 30.0);
    check(plan.powers[0] == 6.0 && plan.powers[1] == 12.0 && plan.powers[2] == 12.0,
          "level-weighted split: [1,2,2] beta=1 P=30 -> [6,12,12] W");
    const PatchPowerPlan uniform = allocate_power(std::vector<int>{1, 5, 3}, 0.0, 30.0);
    check(uniform.powers[0] == 10.0 && uniform.powers[1] == 10.0 &&
              uniform.powers[2] == 10.0,
          "beta=0 splits evenly regardless of levels");
  }
  {
    PatchWeights w;
    w.grid = make_grid(2, 1);
    w.raw = {0.0, 0.2, 0.6, 1.0};
    w = quantize_levels(w, 5);
    check(w.levels == std::vector<int>({1, 1, 3, 5}),
          "level quantization table {0, min, mid, max} -> {1,1,3,5}");
  }
  check(token_count(1, 576) == 1152 && token_count(4, 576) == 2880 &&
            token_count(0, 576) == 576,
        "token counts for 0/1/4 slices of a 576-patch tile");
  {
    ChannelConfig cfg;
    cfg.m_f = 5.0;
    cfg.m_s = 4.0;
    RngStream rng(derive_key(20240817ULL));
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += sample_fading_gain(cfg, rng);
    check(std::abs(sum / n - 1.0) < 0.02, "fading gain has unit mean");
  }
  {
    const PatchGrid grid = make_grid(8, 2);
    const FeatureTensor t = synthesize_features(grid, 16, 7);
    const QuantizedFeatures q = quantize_features(t, 8);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i)
      worst = std::max(worst,
                       std::abs(t.values[i] - dequantize_code(q.codes[i], 8, q.v_max)));
    check(worst <= t.v_max / 128.0, "8-bit quantizer round-trip error bound");
  }
  {
    // No fading, uniform power: BER must track Q(sqrt(2*gamma)).
    const PatchGrid grid = make_grid(16, 1);
    ChannelConfig cfg;
    cfg.m_f = 1e6;
    cfg.m_s = 1e6;
    cfg.snr_db = 7.0;
    cfg.seed = 99;
    const FeatureTensor t = synthesize_features(grid, 64, 3);
    const PatchPowerPlan plan =
        allocate_power(std::vector<int>(grid.patch_count, 1), 0.0, cfg.p_total);
    const TransmitResult res = transmit(t, plan, cfg, 8);
    const double p = q_function(std::sqrt(2.0 * std::pow(10.0, 0.7)));
    const double bits = double(grid.patch_count) * 64 * 8 * 8;
    const double sigma = std::sqrt(p * (1.0 - p) / bits);
    check(std::abs(res.report.overall_ber - p) < 4.0 * sigma,
          "no-fading BER matches the Gaussian-tail formula");
  }

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-oriented semantic communication simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<double> betas, snrs;

  CLI::App* run = app.add_subcommand("run", "Run the configured experiment grid");
  run->add_option("--config", config_path, "JSON config file")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Run with overridden sweep axes");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--beta", betas, "beta values")->delimiter(',');
  sweep->add_option("--snr", snrs, "SNR values in dB")->delimiter(',');

  CLI::App* inspect = app.add_subcommand("inspect-plan", "Print the power plan");
  inspect->add_option("--config", config_path, "JSON config file")->required();

  app.add_subcommand("selftest", "Run the built-in oracle checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (sweep->parsed()) return cmd_sweep(config_path, betas, snrs);
    if (inspect->parsed()) return cmd_inspect_plan(config_path);
    return cmd_selftest();
  } catch (const fasemcom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

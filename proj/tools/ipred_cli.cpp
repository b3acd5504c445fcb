/*
 * SPDX-License-Identifier: Apache-2.0
 */
// Command-line front end for the interference-prediction experiments.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ipred/config.hpp"
#include "ipred/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> slots;
  std::string out_dir = "out";
  bool conservative = false;
  bool empirical = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Scenario file (key = value)");
  cmd->add_option("--seed", flags.seed, "Master seed");
  cmd->add_option("--slots", flags.slots, "Number of evaluated slots");
  cmd->add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
  cmd->add_flag("--conservative", flags.conservative, "Allocate on the upper 95% interference bound");
  cmd->add_flag("--empirical", flags.empirical, "Also draw Bernoulli decode outcomes");
}

ipred::ScenarioConfig resolve(const CommonFlags& flags, bool slots_are_trace) {
  ipred::ScenarioConfig cfg = flags.config_path.empty() ? ipred::ScenarioConfig{} : ipred::load_config(flags.config_path);
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (flags.slots) (slots_are_trace ? cfg.trace_slots : cfg.n_slots) = *flags.slots;
  if (flags.conservative) cfg.conservative = true;
  if (flags.empirical) cfg.empirical = true;
  cfg.validate();
  return cfg;
}

void print_outputs(const ipred::RunManifest& m, const std::filesystem::path& dir) {
  for (const auto& name : m.outputs) std::cout << (dir / name).string() << '\n';
  std::cout << fmt::format("done in {:.2f} s\n", m.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference prediction and proactive finite-blocklength allocation"};
  app.require_subcommand(1);

  CommonFlags trace_flags;
  auto* trace_cmd = app.add_subcommand("predict-trace", "Prior, sliding-window posterior and GPR predictions on one trace");
  add_common(trace_cmd, trace_flags);

  CommonFlags sweep_flags;
  bool slots_csv = false;
  auto* sweep_cmd = app.add_subcommand("outage-sweep", "Achieved vs target outage for GPR, MA and genie predictors");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_flag("--slots-csv", slots_csv, "Write per-slot CSVs for every (predictor, target)");

  CommonFlags tune_flags;
  auto* tune_cmd = app.add_subcommand("tune-kernel", "Log-marginal-likelihood grid search on one window");
  add_common(tune_cmd, tune_flags);

  std::string manifest_path;
  std::string replay_out = "replay";
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the experiment recorded in a manifest.json");
  replay_cmd->add_option("manifest", manifest_path, "Path to manifest.json")->required();
  replay_cmd->add_option("--out", replay_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*trace_cmd) {
      const auto cfg = resolve(trace_flags, true);
      print_outputs(ipred::experiment_prediction_trace(cfg, trace_flags.out_dir), trace_flags.out_dir);
    } else if (*sweep_cmd) {
      const auto cfg = resolve(sweep_flags, false);
      const auto manifest = ipred::experiment_outage_sweep(cfg, sweep_flags.out_dir, {slots_csv});
      print_outputs(manifest, sweep_flags.out_dir);
    } else if (*tune_cmd) {
      const auto cfg = resolve(tune_flags, false);
      const auto report = ipred::experiment_tune_kernel(cfg, tune_flags.out_dir);
      const auto& best = report.grid.kernels[report.grid.best];
      std::cout << fmt::format("best output_scale = {:.6g}\nbest length_scale = {:.6g}\nlog marginal likelihood = {:.6f}\n",
                               best.output_scale, best.length_scale, report.grid.log_likelihoods[report.grid.best]);
      print_outputs(report.manifest, tune_flags.out_dir);
    } else if (*replay_cmd) {
      print_outputs(ipred::replay_manifest(manifest_path, replay_out), replay_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

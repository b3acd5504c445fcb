/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipred/config.hpp"
#include "ipred/csv.hpp"
#include "ipred/gp.hpp"

namespace ipred {

inline constexpr std::string_view kVersion = "0.1.0";
enum class Experiment : std::uint64_t {
  prediction_trace = 1,
  outage_sweep = 2,
  tune_kernel = 3,
};

std::string_view experiment_name(Experiment e);
Experiment experiment_from_name(std::string_view name);

/// Seed of one experiment: derive_seed(master, 0xE000 + id). Independent of
/// which other experiments exist or run.
std::uint64_t experiment_seed(std::uint64_t master, Experiment e);

struct RunManifest {
  Experiment experiment = Experiment::outage_sweep;
  ScenarioConfig config;
  std::string version{kVersion};
  int csv_schema = kCsvSchemaVersion;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;
  /// File names relative to the output directory.
  std::vector<std::string> outputs;
  /// Extra switches that change the outputs (for example per-slot CSVs).
  bool per_slot_csv = false;
  double wall_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

struct HarnessOptions {
  bool per_slot_csv = false;
};

/// Trace, prior band with three sample paths, sliding-window posterior
/// panels and per-slot GPR predictions, plus manifest.json.
RunManifest experiment_prediction_trace(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Achieved vs target outage for GPR, MA and genie on one realization,
/// plus manifest.json.
RunManifest experiment_outage_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                                    const HarnessOptions& options = {});

struct TuneReport {
  GridEvaluation grid;
  RunManifest manifest;
};

/// Grid search over the first `window` slots of a fresh trace (dB, centred).
TuneReport experiment_tune_kernel(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Re-executes the experiment a manifest describes into out_dir.
RunManifest replay_manifest(const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir);

}  // namespace ipred

/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/harness.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "ipred/allocation.hpp"
#include "ipred/csv.hpp"
#include "ipred/fading.hpp"
#include "ipred/predictors.hpp"
#include "ipred/rng.hpp"
#include "ipred/units.hpp"

namespace ipred {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kPriorPaths = 3;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Observed {
  InterferenceTrace trace;
  std::vector<double> desired_gains;
};

Observed observe_channel(const ScenarioConfig& cfg, std::size_t slots, std::uint64_t seed) {
  Observed o;
  o.trace = build_interference_trace(cfg.interferer_links(), slots, derive_seed(seed, Stream::interference));
  if (cfg.desired_fading)
    o.desired_gains = generate_rayleigh_gains(cfg.desired_link(), slots, derive_seed(seed, Stream::desired_link)).gains;
  else
    o.desired_gains.assign(slots, 1.0);
  return o;
}

void finish(RunManifest& manifest, const fs::path& out_dir, const Stopwatch& clock) {
  manifest.outputs.push_back("manifest.json");
  manifest.wall_seconds = clock.seconds();
  write_manifest(out_dir / "manifest.json", manifest);
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::prediction_trace: return "predict-trace";
    case Experiment::outage_sweep: return "outage-sweep";
    case Experiment::tune_kernel: return "tune-kernel";
  }
  throw std::invalid_argument("unknown experiment");
}

Experiment experiment_from_name(std::string_view name) {
  for (auto e : {Experiment::prediction_trace, Experiment::outage_sweep, Experiment::tune_kernel})
    if (experiment_name(e) == name) return e;
  throw std::invalid_argument(fmt::format("unknown experiment '{}'", name));
}

std::uint64_t experiment_seed(std::uint64_t master, Experiment e) {
  return derive_seed(master, 0xE000 + static_cast<std::uint64_t>(e), 0);
}

void write_manifest(const fs::path& path, const RunManifest& manifest) {
  json j;
  j["experiment"] = std::string(experiment_name(manifest.experiment));
  j["version"] = manifest.version;
  j["csv_schema"] = manifest.csv_schema;
  json cfg = json::object();
  for (const auto& [key, value] : config_entries(manifest.config)) cfg[key] = value;
  j["config"] = cfg;
  json seeds = json::object();
  for (const auto& [name, seed] : manifest.seeds) seeds[name] = seed;
  j["seeds"] = seeds;
  j["outputs"] = manifest.outputs;
  j["per_slot_csv"] = manifest.per_slot_csv;
  j["wall_seconds"] = manifest.wall_seconds;
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read manifest '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
  RunManifest m;
  m.experiment = experiment_from_name(j.at("experiment").get<std::string>());
  m.version = j.at("version").get<std::string>();
  m.csv_schema = j.at("csv_schema").get<int>();
  std::string text;
  for (const auto& [key, value] : j.at("config").items()) text += fmt::format("{} = {}\n", key, value.get<std::string>());
  m.config = parse_config(text, path.string());
  for (const auto& [name, seed] : j.at("seeds").items()) m.seeds.emplace_back(name, seed.get<std::uint64_t>());
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.per_slot_csv = j.value("per_slot_csv", false);
  m.wall_seconds = j.value("wall_seconds", 0.0);
  return m;
}

RunManifest experiment_prediction_trace(const ScenarioConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  const Stopwatch clock;
  fs::create_directories(out_dir);
  RunManifest manifest;
  manifest.experiment = Experiment::prediction_trace;
  manifest.config = cfg;
  const std::uint64_t seed = experiment_seed(cfg.master_seed, Experiment::prediction_trace);
  manifest.seeds.emplace_back("experiment", seed);

  const Observed obs = observe_channel(cfg, cfg.trace_slots, seed);
  const auto& trace = obs.trace;
  {
    auto out = open_output(out_dir / "trace.csv");
    write_trace_csv(out, trace, obs.desired_gains);
    manifest.outputs.push_back("trace.csv");
  }

  std::vector<double> slots(trace.size());
  std::vector<double> truth_db(trace.size());
  for (std::size_t t = 0; t < trace.size(); ++t) {
    slots[t] = static_cast<double>(trace.times[t]);
    truth_db[t] = linear_to_db(trace.total[t]);
  }

  // Prior over the centred dB domain: zero mean, band 1.96 sigma_f.
  {
    const auto paths = sample_prior(cfg.kernel, slots, kPriorPaths, derive_seed(seed, Stream::prior_paths));
    const double half = kCi95 * cfg.kernel.output_scale;
    auto out = open_output(out_dir / "prior.csv");
    out << kPriorCsvHeader << '\n';
    for (std::size_t t = 0; t < trace.size(); ++t) {
      out << trace.times[t] << ",0," << csv_number(-half) << ',' << csv_number(half);
      for (const auto& p : paths) out << ',' << csv_number(p[t]);
      out << '\n';
    }
    manifest.outputs.push_back("prior.csv");
  }

  // One panel per sliding-window step: posterior over the window plus the
  // next block, in un-centred dB.
  {
    auto out = open_output(out_dir / "posterior_panels.csv");
    out << kPanelCsvHeader << '\n';
    std::size_t panel = 1;
    for (std::size_t end = cfg.train_len; end < trace.size(); end += cfg.horizon, ++panel) {
      const std::size_t begin = end > cfg.window ? end - cfg.window : 0;
      const std::size_t query_end = std::min(trace.size(), end + cfg.horizon);
      TrainingSet train;
      train.noise_variance = cfg.noise_eps;
      double mean = 0.0;
      for (std::size_t t = begin; t < end; ++t) mean += truth_db[t];
      mean /= static_cast<double>(end - begin);
      for (std::size_t t = begin; t < end; ++t) {
        train.inputs.push_back(slots[t]);
        train.targets.push_back(truth_db[t] - mean);
      }
      const std::vector<double> query(slots.begin() + static_cast<long>(begin), slots.begin() + static_cast<long>(query_end));
      const PosteriorPrediction post = posterior(cfg.kernel, train, query);
      for (std::size_t q = 0; q < query.size(); ++q) {
        const std::size_t t = begin + q;
        out << panel << ',' << trace.times[t] << ',' << csv_number(truth_db[t]) << ','
            << csv_number(post.mean[q] + mean) << ',' << csv_number(post.lower95[q] + mean) << ','
            << csv_number(post.upper95[q] + mean) << ',' << (t < end ? 1 : 0) << '\n';
      }
    }
    manifest.outputs.push_back("posterior_panels.csv");
  }

  {
    const auto records = run_prediction_trace(cfg.gpr(), trace, cfg.train_len);
    auto out = open_output(out_dir / "predictions.csv");
    write_predictions_csv(out, records, trace.total);
    manifest.outputs.push_back("predictions.csv");
  }

  finish(manifest, out_dir, clock);
  return manifest;
}

RunManifest experiment_outage_sweep(const ScenarioConfig& cfg, const fs::path& out_dir,
                                    const HarnessOptions& options) {
  cfg.validate();
  const Stopwatch clock;
  fs::create_directories(out_dir);
  RunManifest manifest;
  manifest.experiment = Experiment::outage_sweep;
  manifest.config = cfg;
  manifest.per_slot_csv = options.per_slot_csv;
  const std::uint64_t seed = experiment_seed(cfg.master_seed, Experiment::outage_sweep);
  manifest.seeds.emplace_back("experiment", seed);

  const std::vector<PredictorKind> predictors{cfg.gpr(), cfg.moving_average(), GenieAided{}};
  const Realization realization = make_realization(cfg, cfg.n_slots, seed);
  const auto rows = sweep_targets(realization, predictors, cfg, cfg.targets, seed, cfg.empirical);
  {
    auto out = open_output(out_dir / "outage.csv");
    write_sweep_csv(out, rows);
    manifest.outputs.push_back("outage.csv");
  }

  if (options.per_slot_csv) {
    for (std::size_t p = 0; p < predictors.size(); ++p) {
      for (std::size_t k = 0; k < cfg.targets.size(); ++k) {
        auto predictor = make_predictor(predictors[p]);
        EpisodeOptions eo;
        eo.empirical = cfg.empirical;
        eo.decode_seed = derive_seed(seed, Stream::decode_draws, p * cfg.targets.size() + k);
        const auto res = run_episode(realization, *predictor, cfg.coding_spec(cfg.targets[k]), eo);
        const auto name = fmt::format("slots_{}_{}.csv", predictor_name(predictors[p]), k + 1);
        auto out = open_output(out_dir / name);
        write_slots_csv(out, res.outcomes);
        manifest.outputs.push_back(name);
      }
    }
  }

  finish(manifest, out_dir, clock);
  return manifest;
}

TuneReport experiment_tune_kernel(const ScenarioConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  const Stopwatch clock;
  fs::create_directories(out_dir);
  TuneReport report;
  auto& manifest = report.manifest;
  manifest.experiment = Experiment::tune_kernel;
  manifest.config = cfg;
  const std::uint64_t seed = experiment_seed(cfg.master_seed, Experiment::tune_kernel);
  manifest.seeds.emplace_back("experiment", seed);

  const Observed obs = observe_channel(cfg, cfg.window, seed);
  TrainingSet train;
  train.noise_variance = cfg.noise_eps;
  double mean = 0.0;
  for (double v : obs.trace.total) mean += linear_to_db(v);
  mean /= static_cast<double>(obs.trace.size());
  for (std::size_t t = 0; t < obs.trace.size(); ++t) {
    train.inputs.push_back(static_cast<double>(obs.trace.times[t]));
    train.targets.push_back(linear_to_db(obs.trace.total[t]) - mean);
  }
  report.grid = evaluate_grid(train, cfg.grid);
  {
    auto out = open_output(out_dir / "tune.csv");
    out << kTuneCsvHeader << '\n';
    for (std::size_t i = 0; i < report.grid.kernels.size(); ++i)
      out << csv_number(report.grid.kernels[i].output_scale) << ','
          << csv_number(report.grid.kernels[i].length_scale) << ','
          << csv_number(report.grid.log_likelihoods[i]) << '\n';
    manifest.outputs.push_back("tune.csv");
  }
  finish(manifest, out_dir, clock);
  return report;
}

RunManifest replay_manifest(const fs::path& manifest_path, const fs::path& out_dir) {
  const RunManifest m = read_manifest(manifest_path);
  switch (m.experiment) {
    case Experiment::prediction_trace: return experiment_prediction_trace(m.config, out_dir);
    case Experiment::outage_sweep: return experiment_outage_sweep(m.config, out_dir, {m.per_slot_csv});
    case Experiment::tune_kernel: return experiment_tune_kernel(m.config, out_dir).manifest;
  }
  throw std::invalid_argument("unknown experiment");
}

}  // namespace ipred

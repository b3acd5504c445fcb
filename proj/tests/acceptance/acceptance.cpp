/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
 * exits non-zero when any criterion fails.
 */
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ipred/allocation.hpp"
#include "ipred/blocklength.hpp"
#include "ipred/harness.hpp"
#include "ipred/units.hpp"
#include "oracles.hpp"

using namespace ipred;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const double kTargets[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
constexpr std::uint64_t kMasterSeeds[] = {1, 2, 3, 4, 5};

double log_distance(double achieved, double target) {
  // a zero achieved outage is as far as the floor of the representable range
  return std::abs(std::log10(std::max(achieved, 1e-300)) - std::log10(target));
}

double db_rmse(std::span<const PredictionRecord> records, const InterferenceTrace& trace) {
  double acc = 0.0;
  for (const auto& r : records) {
    const double e = r.predicted_db - linear_to_db(trace.total[static_cast<std::size_t>(r.slot - 1)]);
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(records.size()));
}

Verdict genie_bound() {
  const ScenarioConfig cfg;
  const PredictorKind genie[] = {GenieAided{}};
  double worst_ratio = 0.0;
  bool ok = true;
  for (auto master : kMasterSeeds) {
    const auto seed = experiment_seed(master, Experiment::outage_sweep);
    for (const auto& row : sweep_targets(cfg, genie, kTargets, 100000, seed)) {
      ok = ok && row.achieved_analytic <= row.target;
      worst_ratio = std::max(worst_ratio, row.achieved_analytic / row.target);
    }
  }
  return {ok, fmt::format("5 seeds x 5 targets x 1e5 slots, worst achieved/target = {:.3f}", worst_ratio)};
}

Verdict predictor_ordering() {
  const ScenarioConfig cfg;
  const PredictorKind kinds[] = {cfg.gpr(), cfg.moving_average(), GenieAided{}};
  const double targets[] = {1e-2, 1e-3};
  int passing = 0;
  std::string lines;
  for (auto master : kMasterSeeds) {
    const auto seed = experiment_seed(master, Experiment::outage_sweep);
    const auto rows = sweep_targets(cfg, kinds, targets, 100000, seed);
    bool seed_ok = true;
    for (std::size_t k = 0; k < 2; ++k) {
      const double target = targets[k];
      const double gpr = rows[k].achieved_analytic;
      const double ma = rows[2 + k].achieved_analytic;
      const double genie = rows[4 + k].achieved_analytic;
      const double d_genie = log_distance(genie, target);
      const double d_gpr = log_distance(gpr, target);
      const double d_ma = log_distance(ma, target);
      const bool genie_first = d_genie <= d_gpr;
      const bool gpr_before_ma = d_gpr <= d_ma;
      const bool ma_off = ma >= 2.0 * target;
      const bool gpr_close = gpr <= 3.0 * target && gpr >= target / 3.0;
      seed_ok = seed_ok && genie_first && gpr_before_ma && ma_off && gpr_close;
      lines += fmt::format(
          "\n    seed {} target {:g}: achieved/target genie {:.3f} gpr {:.3f} ma {:.3f}; log10 distance "
          "genie {:.3f} gpr {:.3f} ma {:.3f}; genie<=gpr {} gpr<=ma {} ma>=2x {} gpr<=3x {}",
          master, target, genie / target, gpr / target, ma / target, d_genie, d_gpr, d_ma, genie_first ? "yes" : "NO",
          gpr_before_ma ? "yes" : "NO", ma_off ? "yes" : "NO", gpr_close ? "yes" : "NO");
    }
    passing += seed_ok ? 1 : 0;
  }
  return {passing >= 3, fmt::format("{}/5 seeds satisfy ordering and ratio bounds{}", passing, lines)};
}

Verdict prediction_accuracy() {
  const ScenarioConfig cfg;
  const auto links = cfg.interferer_links();
  constexpr int kTraces = 50;
  int wins = 0;
  int wins_one_step = 0;
  double gpr_sum = 0.0, ma_sum = 0.0;
  for (int i = 0; i < kTraces; ++i) {
    const auto trace = build_interference_trace(links, 200, derive_seed(cfg.master_seed, Stream::synthetic, i));
    const double gpr = db_rmse(run_prediction_trace(cfg.gpr(), trace, cfg.window, cfg.horizon), trace);
    const double ma = db_rmse(run_prediction_trace(cfg.moving_average(), trace, cfg.window, cfg.horizon), trace);
    wins += gpr < ma ? 1 : 0;
    gpr_sum += gpr;
    ma_sum += ma;
    const double gpr1 = db_rmse(run_prediction_trace(cfg.gpr(), trace, cfg.window, 1), trace);
    const double ma1 = db_rmse(run_prediction_trace(cfg.moving_average(), trace, cfg.window, 1), trace);
    wins_one_step += gpr1 < ma1 ? 1 : 0;
  }
  const bool ok = wins * 10 >= kTraces * 9;
  return {ok, fmt::format("GPR wins {}/{} traces in {}-slot blocks (mean RMSE {:.3f} vs {:.3f} dB); one-step: {}/{}",
                          wins, kTraces, cfg.horizon, gpr_sum / kTraces, ma_sum / kTraces, wins_one_step,
                          kTraces)};
}

Verdict ci_coverage() {
  const ScenarioConfig cfg;
  constexpr std::size_t kTraces = 20, kSlots = 200;
  std::vector<double> inputs(kSlots);
  for (std::size_t t = 0; t < kSlots; ++t) inputs[t] = static_cast<double>(t + 1);
  const auto paths = sample_prior(cfg.kernel, inputs, kTraces, derive_seed(cfg.master_seed, Stream::synthetic, 1000));
  Rng noise_rng(derive_seed(cfg.master_seed, Stream::predictor_noise, 1000));
  std::normal_distribution<double> noise(0.0, std::sqrt(cfg.noise_eps));

  std::size_t inside = 0, total = 0;
  for (const auto& path : paths) {
    InterferenceTrace trace;
    for (std::size_t t = 0; t < kSlots; ++t) {
      trace.times.push_back(static_cast<std::int64_t>(t + 1));
      trace.total.push_back(db_to_linear(path[t] + noise(noise_rng)));
    }
    for (const auto& r : run_prediction_trace(cfg.gpr(), trace, cfg.window)) {
      const double truth = linear_to_db(trace.total[static_cast<std::size_t>(r.slot - 1)]);
      inside += (truth >= r.ci_low_db && truth <= r.ci_high_db) ? 1 : 0;
      ++total;
    }
  }
  const double coverage = static_cast<double>(inside) / static_cast<double>(total);
  return {total >= 1000 && coverage >= 0.90 && coverage <= 0.98,
          fmt::format("coverage {:.4f} over {} predicted points", coverage, total)};
}

std::vector<double> random_inputs(Rng& rng, std::size_t n, double span) {
  std::uniform_real_distribution<double> u(0.0, span);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

Verdict oracle_equivalence() {
  Rng rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> size(2, 50);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_inputs(rng, static_cast<std::size_t>(size(rng)), 60.0);
    const auto q = random_inputs(rng, static_cast<std::size_t>(size(rng)), 70.0);
    const RbfKernel k{0.2 + 2.0 * unit(rng), 0.5 + 4.0 * unit(rng)};
    std::vector<double> y(x.size());
    for (auto& v : y) v = k.output_scale * normal(rng);
    const double noise = k.output_scale * k.output_scale * std::pow(10.0, -3.0 + 2.0 * unit(rng));
    const GpModel model(k, x, noise);
    const auto post = model.predict(y, q, true);
    const auto ref = oracle::posterior(k.output_scale, k.length_scale, noise + model.jitter(), x, y, q);
    for (std::size_t i = 0; i < q.size(); ++i) {
      worst = std::max(worst, std::abs(post.mean[i] - ref.mean[i]));
      for (std::size_t j = 0; j < q.size(); ++j)
        worst = std::max(worst, std::abs((*post.full_covariance)(static_cast<Eigen::Index>(i),
                                                                 static_cast<Eigen::Index>(j)) -
                                         ref.covariance[i][j]));
    }
  }
  return {worst <= 1e-8, fmt::format("100 problems, n <= 50, worst elementwise difference {:.3e}", worst)};
}

Verdict blocklength_duality() {
  int cases = 0, failures = 0;
  double worst_gap = 0.0;
  for (std::int64_t d : {10, 50, 200})
    for (double delta : {1.0, 10.0, 99.0, 1000.0})
      for (double target : kTargets) {
        ++cases;
        const CodingSpec spec{d, target};
        const auto alloc = required_channel_uses(spec, delta);
        if (!alloc) {
          ++failures;
          continue;
        }
        const auto r = alloc->channel_uses;
        const bool meets = achieved_error(spec, r, delta) <= target;
        const bool minimal = r == 1 || achieved_error(spec, r - 1, delta) > target;
        const auto scan = oracle::scan_minimum([&](std::int64_t n) { return achieved_error(spec, n, delta); }, target);
        const double gap = std::abs(alloc->closed_form - static_cast<double>(scan));
        worst_gap = std::max(worst_gap, gap);
        if (!meets || !minimal || r != scan || gap > 1.0) ++failures;
      }
  return {failures == 0, fmt::format("{} grid points, {} failures, worst |closed form - scan| = {:.3f}", cases,
                                     failures, worst_gap)};
}

Verdict special_functions() {
  double worst = 0.0;
  for (int i = -6000; i <= 6000; ++i) {
    const double x = i / 1000.0;
    worst = std::max(worst, std::abs(q_inverse(q_function(x)) - x));
  }
  const double bisected = oracle::bisect_decreasing([](double x) { return q_function(x); }, 1e-5, 0.0, 10.0);
  const double value = q_inverse(1e-5);
  const bool ok = worst <= 1e-8 && std::abs(value - 4.26489) <= 1e-4 && std::abs(value - bisected) <= 1e-4;
  return {ok, fmt::format("round trip worst {:.3e} on [-6, 6]; q_inverse(1e-5) = {:.6f}, bisection {:.6f}", worst,
                          value, bisected)};
}

Verdict channel_statistics() {
  const ScenarioConfig cfg;
  const auto links = cfg.interferer_links();
  const auto trace = build_interference_trace(links, 1000000, derive_seed(cfg.master_seed, Stream::synthetic, 2000));
  double mean = 0.0;
  for (double v : trace.total) mean += v;
  mean /= static_cast<double>(trace.size());
  const bool mean_ok = std::abs(mean - 7.607) <= 0.01 * 7.607;

  // Samples 100 slots apart are effectively independent; pooling the
  // normalized gains of all interferers gives one i.i.d. exponential sample.
  std::vector<double> pooled;
  for (std::size_t i = 0; i < links.size(); ++i)
    for (std::size_t t = 0; t < trace.size(); t += 100) pooled.push_back(trace.per_interferer[i][t] / links[i].mean_power);
  const double d = oracle::ks_exponential(pooled);
  const double critical = oracle::ks_critical_1pct(pooled.size());
  return {mean_ok && d < critical,
          fmt::format("mean {:.4f} over 1e6 slots (7.607 +- 1%); KS D = {:.5f} < {:.5f} on {} samples", mean, d,
                      critical, pooled.size())};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const auto root = fs::temp_directory_path() / "ipred_acceptance_determinism";
  fs::remove_all(root);
  ScenarioConfig cfg;
  cfg.n_slots = 20000;
  cfg.empirical = true;
  std::vector<fs::path> manifests;
  manifests.push_back(root / "trace" / "manifest.json");
  experiment_prediction_trace(cfg, root / "trace");
  manifests.push_back(root / "sweep" / "manifest.json");
  experiment_outage_sweep(cfg, root / "sweep", {true});
  manifests.push_back(root / "tune" / "manifest.json");
  experiment_tune_kernel(cfg, root / "tune");

  std::size_t compared = 0, mismatches = 0;
  for (const auto& manifest : manifests) {
    const auto original = manifest.parent_path();
    for (int rep = 0; rep < 2; ++rep) {
      const auto replay_dir = root / fmt::format("{}_replay{}", original.filename().string(), rep);
      const auto m = replay_manifest(manifest, replay_dir);
      for (const auto& f : m.outputs) {
        if (f == "manifest.json") continue;
        ++compared;
        if (slurp(original / f) != slurp(replay_dir / f) || slurp(original / f).empty()) ++mismatches;
      }
    }
  }
  fs::remove_all(root);
  return {compared > 0 && mismatches == 0,
          fmt::format("{} CSV files replayed from manifests, {} differ", compared, mismatches)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "genie bound", genie_bound},
      {2, "predictor ordering", predictor_ordering},
      {3, "prediction accuracy", prediction_accuracy},
      {4, "CI coverage", ci_coverage},
      {5, "posterior oracle equivalence", oracle_equivalence},
      {6, "blocklength solver duality", blocklength_duality},
      {7, "special-function accuracy", special_functions},
      {8, "channel statistics", channel_statistics},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("criterion {} {}: {} [{:.1f} s] {}\n", c.id, c.name, v.pass ? "PASS" : "FAIL", secs, v.detail);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  fmt::print("{} of {} criteria passed\n", std::size(criteria) - static_cast<std::size_t>(failed), std::size(criteria));
  return failed == 0 ? 0 : 1;
}

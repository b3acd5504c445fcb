/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipred/blocklength.hpp"
#include "ipred/config.hpp"
#include "ipred/fading.hpp"
#include "ipred/predictors.hpp"

namespace ipred {

struct SlotOutcome {
  std::int64_t slot = 0;
  double desired_gain = 0.0;
  double predicted_interference = 0.0;
  double actual_interference = 0.0;
  double predicted_sinr = 0.0;
  double actual_sinr = 0.0;
  /// 0 when the slot could not be allocated.
  std::int64_t channel_uses = 0;
  double target_error = 0.0;
  double achieved_error = 0.0;
  std::optional<bool> decode_failure;

  bool allocatable() const { return channel_uses >= 1; }
};

struct EpisodeResult {
  std::vector<SlotOutcome> outcomes;
  double achieved_outage_analytic = 0.0;
  /// Fraction of Bernoulli decode failures; NaN when draws are disabled.
  double achieved_outage_empirical = 0.0;
  std::size_t slots_evaluated = 0;
  double mean_channel_uses = 0.0;
  std::size_t unallocatable_slots = 0;
};

/// Channel draws shared by every predictor in a comparison. The first
/// `warmup` slots are observation-only.
struct Realization {
  LinkConfig desired;
  InterferenceTrace interference;
  std::vector<double> desired_gains;
  std::size_t warmup = 0;

  std::size_t slots() const { return interference.size() - warmup; }
};

Realization make_realization(const ScenarioConfig& cfg, std::size_t n_slots, std::uint64_t seed);

struct EpisodeOptions {
  /// Draw a Bernoulli(achieved_error) decode outcome per slot.
  bool empirical = false;
  std::uint64_t decode_seed = 0;
  bool keep_outcomes = true;
};

/// Per slot: predict I_p from history, form the predicted SINR with the
/// known desired gain, allocate R, then evaluate the error at the realized
/// SINR and reveal I(t) to the predictor.
EpisodeResult run_episode(const Realization& realization, InterferencePredictor& predictor,
                          const CodingSpec& spec, const EpisodeOptions& options = {});

EpisodeResult run_episode(const ScenarioConfig& scenario, const PredictorKind& predictor,
                          const CodingSpec& spec, std::size_t n_slots, std::uint64_t seed,
                          const EpisodeOptions& options = {});

struct SweepRow {
  std::string predictor;
  double target = 0.0;
  double achieved_analytic = 0.0;
  double achieved_empirical = 0.0;
  std::size_t slots = 0;
  double mean_channel_uses = 0.0;
  std::size_t unallocatable_slots = 0;
};

/// One episode per (predictor, target), all on one realization (common
/// random numbers). Rows are ordered predictor-major. Episodes run in
/// parallel; decode draws use a stream per pair derived from `seed`.
std::vector<SweepRow> sweep_targets(const ScenarioConfig& scenario,
                                    std::span<const PredictorKind> predictors,
                                    std::span<const double> targets, std::size_t n_slots,
                                    std::uint64_t seed, bool empirical = false);

std::vector<SweepRow> sweep_targets(const Realization& realization,
                                    std::span<const PredictorKind> predictors,
                                    const ScenarioConfig& scenario, std::span<const double> targets,
                                    std::uint64_t seed, bool empirical = false);

/// `predictor,target,achieved_analytic,achieved_empirical,slots,mean_R,unallocatable_slots`
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

/// Per-slot detail for one episode.
void write_slots_csv(std::ostream& os, std::span<const SlotOutcome> outcomes);

}  // namespace ipred

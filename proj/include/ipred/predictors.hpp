/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ipred/fading.hpp"
#include "ipred/gp.hpp"
#include "ipred/rng.hpp"

namespace ipred {

/// GPR over a sliding window of the most recent observations (in dB, centred
/// on the window mean).
struct GprSlidingWindow {
  std::size_t window = 75;
  std::size_t horizon = 5;
  RbfKernel kernel{};
  /// Observation noise variance in the centred dB domain.
  double noise_variance = 1e-3;
  /// Grid-tune the kernel once, on the first full window.
  bool tune = false;
  /// Report the upper 95% bound instead of the posterior mean.
  bool conservative = false;
  HyperparameterGrid grid{};
};

enum class MovingAverageMode {
  /// alpha * (previous estimate) + (1 - alpha) * I_t
  iir,
  /// alpha * I_{t-1} + (1 - alpha) * I_t on raw samples
  raw,
};

struct MovingAverage {
  double alpha = 0.01;
  MovingAverageMode mode = MovingAverageMode::iir;
};

struct GenieAided {};

using PredictorKind = std::variant<GprSlidingWindow, MovingAverage, GenieAided>;

/// "gpr", "ma" or "genie".
std::string predictor_name(const PredictorKind& kind);
void validate(const PredictorKind& kind);

struct PredictionRecord {
  std::int64_t slot = 0;
  double predicted_linear = 0.0;
  double predicted_db = 0.0;
  double ci_low_db = 0.0;
  double ci_high_db = 0.0;
  /// Produced by the warm-up fallback rather than the configured predictor.
  bool warmup = false;
};

/// One-step-ahead interference predictor. Owns its observation history.
class InterferencePredictor {
 public:
  virtual ~InterferencePredictor() = default;

  /// Appends the realized interference (linear) of the latest slot.
  virtual void observe(double interference) = 0;

  /// Prediction for `slot`, the slot after the last observation. truth_next
  /// is read only by the genie.
  virtual PredictionRecord predict_next(std::int64_t slot, double truth_next) = 0;

  /// Predictions for `count` consecutive slots from the current history.
  /// The default repeats predict_next without new observations.
  virtual std::vector<PredictionRecord> predict_block(std::int64_t first_slot,
                                                      std::span<const double> truth);

  virtual std::string name() const = 0;
};

/// noise_seed enables the additive epsilon-noise draw on GPR predictions;
/// leave it empty for deterministic mean predictions.
std::unique_ptr<InterferencePredictor> make_predictor(const PredictorKind& kind,
                                                      std::optional<std::uint64_t> noise_seed = {});

/// Stateless convenience form: replays `history` into a fresh predictor and
/// predicts the next slot.
PredictionRecord predict_next(const PredictorKind& kind, std::span<const double> history,
                              double truth_next, std::optional<std::uint64_t> noise_seed = {});

/// First train_len slots are observation-only. After that every predictor
/// forecasts `block` consecutive slots from the same history and then
/// observes them, so all kinds see identical information. block = 0 uses the
/// GPR horizon for GPR and 1 otherwise.
std::vector<PredictionRecord> run_prediction_trace(const PredictorKind& kind,
                                                   const InterferenceTrace& trace,
                                                   std::size_t train_len, std::size_t block = 0);

/// Batch one-step GPR means over every full window of a dB series:
/// out[s] predicts series_db[s + window] from series_db[s .. s + window).
std::vector<double> gpr_one_step_means(const RbfKernel& kernel, double noise_variance,
                                       std::size_t window, std::span<const double> series_db);

/// CSV `slot,true_db,pred_db,ci_low_db,ci_high_db,pred_linear`. truth_linear
/// is indexed by slot - 1.
void write_predictions_csv(std::ostream& os, std::span<const PredictionRecord> records,
                           std::span<const double> truth_linear);

}  // namespace ipred

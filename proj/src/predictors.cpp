/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/predictors.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "ipred/csv.hpp"
#include "ipred/kernels.hpp"
#include "ipred/units.hpp"

namespace ipred {

namespace {

constexpr double kWarmupAlpha = 0.5;

PredictionRecord point_record(std::int64_t slot, double linear) {
  PredictionRecord r;
  r.slot = slot;
  r.predicted_linear = linear;
  r.predicted_db = linear_to_db(linear);
  r.ci_low_db = r.predicted_db;
  r.ci_high_db = r.predicted_db;
  return r;
}

std::vector<double> iota_inputs(std::size_t first, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(first + i);
  return out;
}

class GeniePredictor final : public InterferencePredictor {
 public:
  void observe(double) override {}

  PredictionRecord predict_next(std::int64_t slot, double truth_next) override {
    return point_record(slot, truth_next);
  }

  std::vector<PredictionRecord> predict_block(std::int64_t first_slot,
                                              std::span<const double> truth) override {
    std::vector<PredictionRecord> out;
    for (std::size_t j = 0; j < truth.size(); ++j)
      out.push_back(point_record(first_slot + static_cast<std::int64_t>(j), truth[j]));
    return out;
  }

  std::string name() const override { return "genie"; }
};

class MovingAveragePredictor final : public InterferencePredictor {
 public:
  explicit MovingAveragePredictor(MovingAverage cfg) : cfg_(cfg) {}

  void observe(double interference) override {
    prev_ = last_;
    last_ = interference;
    estimate_ = count_ == 0 ? interference : cfg_.alpha * estimate_ + (1.0 - cfg_.alpha) * interference;
    ++count_;
  }

  PredictionRecord predict_next(std::int64_t slot, double) override {
    if (count_ == 0) throw std::logic_error("moving-average prediction needs at least one observation");
    if (count_ == 1) {
      auto r = point_record(slot, last_);
      r.warmup = true;
      return r;
    }
    const double value =
        cfg_.mode == MovingAverageMode::iir ? estimate_ : cfg_.alpha * prev_ + (1.0 - cfg_.alpha) * last_;
    return point_record(slot, value);
  }

  std::string name() const override { return "ma"; }

 private:
  MovingAverage cfg_;
  std::size_t count_ = 0;
  double last_ = 0.0;
  double prev_ = 0.0;
  double estimate_ = 0.0;
};

class GprPredictor final : public InterferencePredictor {
 public:
  GprPredictor(GprSlidingWindow cfg, std::optional<std::uint64_t> noise_seed) : cfg_(std::move(cfg)) {
    if (noise_seed) noise_rng_.emplace(*noise_seed);
  }

  void observe(double interference) override {
    history_db_.push_back(linear_to_db(interference));
    if (history_db_.size() > cfg_.window) history_db_.pop_front();
    prev_ = last_;
    last_ = interference;
    ++count_;
  }

  PredictionRecord predict_next(std::int64_t slot, double truth_next) override {
    const double truth[1] = {truth_next};
    return predict_block(slot, truth).front();
  }

  std::vector<PredictionRecord> predict_block(std::int64_t first_slot,
                                              std::span<const double> truth) override {
    const std::size_t steps = truth.size();
    std::vector<PredictionRecord> out;
    out.reserve(steps);
    if (count_ < cfg_.window) {
      if (count_ == 0) throw std::logic_error("GPR prediction needs at least one observation");
      const double fallback = count_ == 1 ? last_ : kWarmupAlpha * prev_ + (1.0 - kWarmupAlpha) * last_;
      for (std::size_t j = 0; j < steps; ++j) {
        out.push_back(point_record(first_slot + static_cast<std::int64_t>(j), fallback));
        out.back().warmup = true;
      }
      return out;
    }
    if (steps > cfg_.horizon)
      throw std::invalid_argument(fmt::format("block of {} exceeds the horizon {}", steps, cfg_.horizon));

    const std::vector<double> window(history_db_.begin(), history_db_.end());
    double mean = 0.0;
    for (double v : window) mean += v;
    mean /= static_cast<double>(window.size());
    std::vector<double> centred(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) centred[i] = window[i] - mean;

    if (!predictor_) build(centred);

    const Eigen::Map<const Eigen::VectorXd> y(centred.data(), static_cast<Eigen::Index>(centred.size()));
    for (std::size_t j = 0; j < steps; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      double predicted = mean + predictor_->weights.col(jj).dot(y);
      if (noise_rng_) {
        std::normal_distribution<double> eps(0.0, std::sqrt(cfg_.noise_variance));
        predicted += eps(*noise_rng_);
      }
      const double half = kCi95 * std::sqrt(predictor_->latent_variance(jj) + cfg_.noise_variance);
      PredictionRecord r;
      r.slot = first_slot + static_cast<std::int64_t>(j);
      r.ci_low_db = predicted - half;
      r.ci_high_db = predicted + half;
      r.predicted_db = cfg_.conservative ? r.ci_high_db : predicted;
      r.predicted_linear = db_to_linear(r.predicted_db);
      out.push_back(r);
    }
    return out;
  }

  std::string name() const override { return "gpr"; }

  const RbfKernel& kernel() const { return cfg_.kernel; }

 private:
  // Window inputs are 0..W-1 and queries W..W+H-1 relative to the window
  // start; the kernel is stationary, so one factorization serves every slot.
  void build(const std::vector<double>& centred) {
    const std::vector<double> inputs = iota_inputs(0, cfg_.window);
    if (cfg_.tune) {
      TrainingSet train{inputs, centred, cfg_.noise_variance};
      cfg_.kernel = tune_hyperparameters(train, cfg_.grid);
    }
    const GpModel model(cfg_.kernel, inputs, cfg_.noise_variance);
    predictor_ = model.linear_predictor(iota_inputs(cfg_.window, cfg_.horizon));
  }

  GprSlidingWindow cfg_;
  std::deque<double> history_db_;
  std::size_t count_ = 0;
  double last_ = 0.0;
  double prev_ = 0.0;
  std::optional<LinearPredictor> predictor_;
  std::optional<Rng> noise_rng_;
};

}  // namespace

std::vector<PredictionRecord> InterferencePredictor::predict_block(std::int64_t first_slot,
                                                                   std::span<const double> truth) {
  std::vector<PredictionRecord> out;
  for (std::size_t j = 0; j < truth.size(); ++j)
    out.push_back(predict_next(first_slot + static_cast<std::int64_t>(j), truth[j]));
  return out;
}

std::string predictor_name(const PredictorKind& kind) {
  struct Visitor {
    std::string operator()(const GprSlidingWindow&) const { return "gpr"; }
    std::string operator()(const MovingAverage&) const { return "ma"; }
    std::string operator()(const GenieAided&) const { return "genie"; }
  };
  return std::visit(Visitor{}, kind);
}

void validate(const PredictorKind& kind) {
  if (const auto* g = std::get_if<GprSlidingWindow>(&kind)) {
    if (g->window < 2) throw std::invalid_argument(fmt::format("window must be >= 2, got {}", g->window));
    if (g->horizon < 1) throw std::invalid_argument(fmt::format("horizon must be >= 1, got {}", g->horizon));
    if (!(g->noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
    g->kernel.validate();
    if (g->tune) g->grid.validate();
  } else if (const auto* m = std::get_if<MovingAverage>(&kind)) {
    if (!(m->alpha > 0.0 && m->alpha < 1.0))
      throw std::invalid_argument(fmt::format("alpha must lie in (0, 1), got {}", m->alpha));
  }
}

std::unique_ptr<InterferencePredictor> make_predictor(const PredictorKind& kind,
                                                      std::optional<std::uint64_t> noise_seed) {
  validate(kind);
  if (const auto* g = std::get_if<GprSlidingWindow>(&kind)) return std::make_unique<GprPredictor>(*g, noise_seed);
  if (const auto* m = std::get_if<MovingAverage>(&kind)) return std::make_unique<MovingAveragePredictor>(*m);
  return std::make_unique<GeniePredictor>();
}

PredictionRecord predict_next(const PredictorKind& kind, std::span<const double> history,
                              double truth_next, std::optional<std::uint64_t> noise_seed) {
  auto predictor = make_predictor(kind, noise_seed);
  for (double v : history) predictor->observe(v);
  return predictor->predict_next(static_cast<std::int64_t>(history.size()) + 1, truth_next);
}

std::vector<PredictionRecord> run_prediction_trace(const PredictorKind& kind,
                                                   const InterferenceTrace& trace,
                                                   std::size_t train_len, std::size_t block) {
  if (trace.size() <= train_len)
    throw std::invalid_argument(
        fmt::format("trace of {} slots is not longer than train_len {}", trace.size(), train_len));
  auto predictor = make_predictor(kind);
  for (std::size_t t = 0; t < train_len; ++t) predictor->observe(trace.total[t]);

  if (block == 0) {
    const auto* gpr = std::get_if<GprSlidingWindow>(&kind);
    block = gpr ? gpr->horizon : 1;
  }

  std::vector<PredictionRecord> out;
  out.reserve(trace.size() - train_len);
  for (std::size_t t = train_len; t < trace.size(); t += block) {
    const std::size_t steps = std::min(block, trace.size() - t);
    const std::span<const double> truth(trace.total.data() + t, steps);
    auto records = predictor->predict_block(trace.times[t], truth);
    out.insert(out.end(), records.begin(), records.end());
    for (double v : truth) predictor->observe(v);
  }
  return out;
}

std::vector<double> gpr_one_step_means(const RbfKernel& kernel, double noise_variance,
                                       std::size_t window, std::span<const double> series_db) {
  if (window < 2) throw std::invalid_argument("window must be >= 2");
  if (series_db.size() < window) throw std::invalid_argument("series shorter than the window");
  const GpModel model(kernel, iota_inputs(0, window), noise_variance);
  const LinearPredictor lp = model.linear_predictor(iota_inputs(window, 1));
  const std::span<const double> weights(lp.weights.data(), window);
  std::vector<double> out(series_db.size() - window + 1);
  kernels::omp::sliding_window_apply(series_db, weights, out);
  return out;
}

void write_predictions_csv(std::ostream& os, std::span<const PredictionRecord> records,
                           std::span<const double> truth_linear) {
  os << kPredictionCsvHeader << '\n';
  for (const auto& r : records) {
    const auto idx = static_cast<std::size_t>(r.slot - 1);
    if (r.slot < 1 || idx >= truth_linear.size())
      throw std::out_of_range(fmt::format("slot {} outside the truth series", r.slot));
    os << r.slot << ',' << csv_number(linear_to_db(truth_linear[idx])) << ',' << csv_number(r.predicted_db)
       << ',' << csv_number(r.ci_low_db) << ',' << csv_number(r.ci_high_db) << ','
       << csv_number(r.predicted_linear) << '\n';
  }
}

}  // namespace ipred

/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/allocation.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "ipred/csv.hpp"
#include "ipred/rng.hpp"

namespace ipred {

Realization make_realization(const ScenarioConfig& cfg, std::size_t n_slots, std::uint64_t seed) {
  if (n_slots == 0) throw std::invalid_argument("n_slots must be at least 1");
  cfg.validate();
  Realization r;
  r.desired = cfg.desired_link();
  r.warmup = cfg.window;
  const std::size_t total = r.warmup + n_slots;
  const auto interferers = cfg.interferer_links();
  r.interference = build_interference_trace(interferers, total, derive_seed(seed, Stream::interference));
  if (cfg.desired_fading)
    r.desired_gains = generate_rayleigh_gains(r.desired, total, derive_seed(seed, Stream::desired_link)).gains;
  else
    r.desired_gains.assign(total, 1.0);
  return r;
}

EpisodeResult run_episode(const Realization& realization, InterferencePredictor& predictor,
                          const CodingSpec& spec, const EpisodeOptions& options) {
  spec.validate();
  const auto& trace = realization.interference;
  if (trace.size() <= realization.warmup) throw std::invalid_argument("realization has no evaluated slots");
  if (realization.desired_gains.size() != trace.size())
    throw std::invalid_argument("desired gains and interference differ in length");

  for (std::size_t t = 0; t < realization.warmup; ++t) predictor.observe(trace.total[t]);

  Rng decode_rng(options.decode_seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  EpisodeResult result;
  if (options.keep_outcomes) result.outcomes.reserve(realization.slots());
  double error_sum = 0.0;
  std::size_t failures = 0;
  double uses_sum = 0.0;
  std::size_t allocated = 0;

  for (std::size_t t = realization.warmup; t < trace.size(); ++t) {
    SlotOutcome o;
    o.slot = trace.times[t];
    o.target_error = spec.target_error;
    o.desired_gain = realization.desired_gains[t];
    o.actual_interference = trace.total[t];

    const PredictionRecord rec = predictor.predict_next(o.slot, o.actual_interference);
    o.predicted_interference = rec.predicted_linear;
    o.predicted_sinr = compute_sinr(realization.desired, o.desired_gain, o.predicted_interference).sinr;
    o.actual_sinr = compute_sinr(realization.desired, o.desired_gain, o.actual_interference).sinr;

    if (const auto alloc = required_channel_uses(spec, o.predicted_sinr)) {
      o.channel_uses = alloc->channel_uses;
      o.achieved_error = achieved_error(spec, o.channel_uses, o.actual_sinr);
      uses_sum += static_cast<double>(o.channel_uses);
      ++allocated;
    } else {
      o.achieved_error = 1.0;
      ++result.unallocatable_slots;
    }
    if (options.empirical) {
      o.decode_failure = uniform(decode_rng) < o.achieved_error;
      if (*o.decode_failure) ++failures;
    }
    error_sum += o.achieved_error;
    predictor.observe(o.actual_interference);
    if (options.keep_outcomes) result.outcomes.push_back(o);
  }

  result.slots_evaluated = realization.slots();
  const auto n = static_cast<double>(result.slots_evaluated);
  result.achieved_outage_analytic = error_sum / n;
  result.achieved_outage_empirical =
      options.empirical ? static_cast<double>(failures) / n : std::numeric_limits<double>::quiet_NaN();
  result.mean_channel_uses = allocated ? uses_sum / static_cast<double>(allocated) : 0.0;
  return result;
}

EpisodeResult run_episode(const ScenarioConfig& scenario, const PredictorKind& predictor,
                          const CodingSpec& spec, std::size_t n_slots, std::uint64_t seed,
                          const EpisodeOptions& options) {
  const Realization realization = make_realization(scenario, n_slots, seed);
  auto p = make_predictor(predictor);
  return run_episode(realization, *p, spec, options);
}

std::vector<SweepRow> sweep_targets(const Realization& realization,
                                    std::span<const PredictorKind> predictors,
                                    const ScenarioConfig& scenario, std::span<const double> targets,
                                    std::uint64_t seed, bool empirical) {
  if (targets.empty()) throw std::invalid_argument("target list is empty");
  for (const auto& p : predictors) validate(p);
  std::vector<CodingSpec> specs;
  for (double target : targets) {
    specs.push_back(scenario.coding_spec(target));
    specs.back().validate();
  }

  const std::size_t pairs = predictors.size() * targets.size();
  std::vector<SweepRow> rows(pairs);
  std::exception_ptr failure;
  const auto n = static_cast<long>(pairs);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      const auto& kind = predictors[idx / targets.size()];
      const auto& spec = specs[idx % targets.size()];
      auto predictor = make_predictor(kind);
      EpisodeOptions options;
      options.empirical = empirical;
      options.decode_seed = derive_seed(seed, Stream::decode_draws, idx);
      options.keep_outcomes = false;
      const EpisodeResult res = run_episode(realization, *predictor, spec, options);
      rows[idx] = SweepRow{predictor_name(kind), spec.target_error, res.achieved_outage_analytic,
                           res.achieved_outage_empirical, res.slots_evaluated,
                           res.mean_channel_uses, res.unallocatable_slots};
    } catch (...) {
#pragma omp critical(ipred_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<SweepRow> sweep_targets(const ScenarioConfig& scenario,
                                    std::span<const PredictorKind> predictors,
                                    std::span<const double> targets, std::size_t n_slots,
                                    std::uint64_t seed, bool empirical) {
  const Realization realization = make_realization(scenario, n_slots, seed);
  return sweep_targets(realization, predictors, scenario, targets, seed, empirical);
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows)
    os << r.predictor << ',' << csv_number(r.target) << ',' << csv_number(r.achieved_analytic) << ','
       << csv_number(r.achieved_empirical) << ',' << r.slots << ',' << csv_number(r.mean_channel_uses) << ','
       << r.unallocatable_slots << '\n';
}

void write_slots_csv(std::ostream& os, std::span<const SlotOutcome> outcomes) {
  os << kSlotsCsvHeader << '\n';
  for (const auto& o : outcomes) {
    os << o.slot << ',' << csv_number(o.desired_gain) << ',' << csv_number(o.predicted_interference) << ','
       << csv_number(o.actual_interference) << ',' << csv_number(o.predicted_sinr) << ','
       << csv_number(o.actual_sinr) << ',' << o.channel_uses << ',' << csv_number(o.target_error) << ','
       << csv_number(o.achieved_error) << ',';
    if (o.decode_failure) os << (*o.decode_failure ? 1 : 0);
    os << '\n';
  }
}

}  // namespace ipred

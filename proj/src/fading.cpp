/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/fading.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "ipred/csv.hpp"
#include "ipred/kernels.hpp"
#include "ipred/rng.hpp"
#include "ipred/units.hpp"

namespace ipred {

namespace {

std::vector<double> gaussian_profile(double width) {
  const auto half = static_cast<long>(std::ceil(6.0 * width)) + 1;
  std::vector<double> taps;
  taps.reserve(static_cast<std::size_t>(2 * half + 1));
  double energy = 0.0;
  for (long k = -half; k <= half; ++k) {
    const double g = std::exp(-0.5 * static_cast<double>(k * k) / (width * width));
    taps.push_back(g);
    energy += g * g;
  }
  const double norm = 1.0 / std::sqrt(energy);
  for (double& g : taps) g *= norm;
  return taps;
}

double lag_one(const std::vector<double>& taps) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < taps.size(); ++k) acc += taps[k] * taps[k + 1];
  return acc;
}

}  // namespace

LinkConfig LinkConfig::from_db(double db, double coherence, CorrelationModel model) {
  return LinkConfig{db_to_linear(db), coherence, model};
}

void LinkConfig::validate() const {
  if (!(mean_power > 0.0) || !std::isfinite(mean_power))
    throw std::invalid_argument(fmt::format("mean_power must be positive, got {}", mean_power));
  if (!(coherence >= 0.0 && coherence < 1.0))
    throw std::invalid_argument(fmt::format("coherence must lie in [0, 1), got {}", coherence));
}

std::vector<double> gaussian_doppler_taps(double coherence) {
  if (!(coherence >= 0.0 && coherence < 1.0))
    throw std::invalid_argument(fmt::format("coherence must lie in [0, 1), got {}", coherence));
  if (coherence == 0.0) return {1.0};

  // Lag-1 correlation is increasing in the profile width; bracket then bisect.
  double lo = 1e-3;
  double hi = 1.0;
  while (lag_one(gaussian_profile(hi)) < coherence) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (lag_one(gaussian_profile(mid)) < coherence)
      lo = mid;
    else
      hi = mid;
  }
  return gaussian_profile(0.5 * (lo + hi));
}

std::vector<std::complex<double>> generate_complex_amplitudes(const LinkConfig& cfg,
                                                              std::size_t n_steps,
                                                              std::uint64_t seed) {
  if (n_steps == 0) throw std::invalid_argument("n_steps must be at least 1");
  if (!(cfg.coherence >= 0.0 && cfg.coherence < 1.0))
    throw std::invalid_argument(fmt::format("coherence must lie in [0, 1), got {}", cfg.coherence));

  Rng rng(seed);
  std::vector<std::complex<double>> h(n_steps);

  if (cfg.model == CorrelationModel::autoregressive) {
    const double rho = cfg.coherence;
    const double innovation = std::sqrt(1.0 - rho * rho);
    h[0] = complex_normal(rng);
    for (std::size_t t = 1; t < n_steps; ++t) h[t] = rho * h[t - 1] + innovation * complex_normal(rng);
    return h;
  }

  const std::vector<double> taps = gaussian_doppler_taps(cfg.coherence);
  std::vector<std::complex<double>> white(n_steps + taps.size() - 1);
  for (auto& w : white) w = complex_normal(rng);
  kernels::omp::fir_filter(white, taps, h);
  return h;
}

ChannelRealization generate_rayleigh_gains(const LinkConfig& cfg, std::size_t n_steps,
                                           std::uint64_t seed) {
  const auto h = generate_complex_amplitudes(cfg, n_steps, seed);
  ChannelRealization out;
  out.gains.reserve(h.size());
  for (const auto& z : h) out.gains.push_back(std::norm(z));
  return out;
}

InterferenceTrace build_interference_trace(std::span<const LinkConfig> interferers,
                                           std::size_t n_steps, std::uint64_t seed) {
  if (interferers.empty()) throw std::invalid_argument("at least one interferer is required");
  for (const auto& cfg : interferers) cfg.validate();

  InterferenceTrace trace;
  trace.times.resize(n_steps);
  for (std::size_t t = 0; t < n_steps; ++t) trace.times[t] = static_cast<std::int64_t>(t) + 1;
  trace.total.assign(n_steps, 0.0);
  trace.per_interferer.reserve(interferers.size());

  for (std::size_t i = 0; i < interferers.size(); ++i) {
    const auto gains = generate_rayleigh_gains(interferers[i], n_steps, derive_seed(seed, 0x100, i));
    std::vector<double> contribution(n_steps);
    for (std::size_t t = 0; t < n_steps; ++t) contribution[t] = interferers[i].mean_power * gains.gains[t];
    trace.per_interferer.push_back(std::move(contribution));
  }
  // Summed in interferer order so total matches a columnwise re-summation exactly.
  for (const auto& row : trace.per_interferer)
    for (std::size_t t = 0; t < n_steps; ++t) trace.total[t] += row[t];
  return trace;
}

SinrSample compute_sinr(const LinkConfig& desired, double desired_gain, double interference) {
  SinrSample s;
  s.desired_power = desired.mean_power * desired_gain;
  s.interference = interference;
  s.sinr = s.desired_power / (interference + 1.0);
  return s;
}

void write_trace_csv(std::ostream& os, const InterferenceTrace& trace,
                     std::span<const double> desired_gains) {
  if (desired_gains.size() != trace.size())
    throw std::invalid_argument("desired_gains length must match the trace");
  os << "t,total";
  for (std::size_t i = 0; i < trace.per_interferer.size(); ++i) os << ",i" << (i + 1);
  os << ",desired_gain\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    os << trace.times[t] << ',' << csv_number(trace.total[t]);
    for (const auto& row : trace.per_interferer) os << ',' << csv_number(row[t]);
    os << ',' << csv_number(desired_gains[t]) << '\n';
  }
}

}  // namespace ipred

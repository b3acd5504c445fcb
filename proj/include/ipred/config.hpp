/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipred/blocklength.hpp"
#include "ipred/fading.hpp"
#include "ipred/gp.hpp"
#include "ipred/predictors.hpp"

namespace ipred {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full experiment parameterization. Defaults reproduce the reference
/// indoor scenario: 20 dB desired link, six interferers, D = 50 bits.
struct ScenarioConfig {
  double desired_snr_db = 20.0;
  std::vector<double> interferer_inrs_db{5.0, 2.0, 0.0, -3.0, -10.0, 1.0};
  double coherence = 0.95;
  CorrelationModel fading_model = CorrelationModel::gaussian;
  /// When false the desired-link gain is frozen at 1.
  bool desired_fading = true;

  RbfKernel kernel{0.5, 2.5};
  /// Observation noise variance of the GP in the centred dB domain.
  double noise_eps = 1e-3;
  bool tune = false;
  HyperparameterGrid grid{};
  std::size_t window = 75;
  std::size_t horizon = 5;
  bool conservative = false;

  double alpha = 0.01;
  MovingAverageMode ma_mode = MovingAverageMode::iir;

  std::int64_t payload_bits = 50;
  std::vector<double> targets{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

  std::size_t n_slots = 100000;
  /// Length of the prediction-trace experiment and its observation-only prefix.
  std::size_t trace_slots = 100;
  std::size_t train_len = 75;
  bool empirical = false;
  std::uint64_t master_seed = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  LinkConfig desired_link() const;
  std::vector<LinkConfig> interferer_links() const;
  GprSlidingWindow gpr() const;
  MovingAverage moving_average() const;
  CodingSpec coding_spec(double target) const;
};

/// Flat `key = value` text; `#` starts a comment; lists are comma separated
/// with optional brackets. Unspecified keys keep their defaults, unknown or
/// repeated keys are errors. `source` prefixes error messages.
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, in a fixed order. Feeding the joined
/// `key = value` lines back to parse_config reproduces the config exactly.
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& cfg);
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace ipred

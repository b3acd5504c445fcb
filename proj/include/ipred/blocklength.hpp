/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>

namespace ipred {

/// Payload size and target block error probability for one slot.
struct CodingSpec {
  std::int64_t payload_bits = 50;
  double target_error = 1e-3;

  /// payload_bits >= 1, target_error in (0, 0.5).
  void validate() const;
};

inline constexpr double kMaxChannelUses = 1e12;

struct Allocation {
  std::int64_t channel_uses = 1;
  double predicted_sinr = 0.0;
  /// Real-valued normal-approximation estimate before integer rounding.
  double closed_form = 0.0;
};

/// Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

/// Inverse of q_function on (0, 1). Throws std::invalid_argument outside.
double q_inverse(double p);

/// Shannon capacity log2(1 + delta), bits per channel use.
double capacity(double delta);

/// AWGN channel dispersion (1 - (1 + delta)^-2) (log2 e)^2.
double dispersion(double delta);

/// Closed-form real-valued channel-use estimate from the normal
/// approximation with the log term dropped. Requires delta > 0.
double channel_uses_closed_form(const CodingSpec& spec, double delta);

/// Normal-approximation block error probability for r channel uses at SINR delta.
double achieved_error(const CodingSpec& spec, std::int64_t r, double delta);

/// Smallest integer R with achieved_error(spec, R, delta_p) <= target_error,
/// found by rounding the closed form up and walking to the minimum.
/// Returns nullopt when delta_p == 0 (no finite allocation exists) or when
/// the estimate exceeds kMaxChannelUses.
std::optional<Allocation> required_channel_uses(const CodingSpec& spec, double delta_p);

}  // namespace ipred

/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ipred {

/// Shape of the temporal correlation of the complex fading amplitude.
enum class CorrelationModel {
  /// Gaussian Doppler spectrum: smooth, autocorrelation ~ exp(-m^2 / (4 s^2)).
  gaussian,
  /// First-order autoregressive recursion: autocorrelation coherence^|m|.
  autoregressive,
};

/// One Rayleigh link. mean_power is linear and relative to the noise power
/// (noise normalized to 1), so it is the average SNR of the desired link or
/// the INR of an interferer.
struct LinkConfig {
  double mean_power = 1.0;
  /// Correlation coefficient between consecutive complex amplitudes, in [0, 1).
  double coherence = 0.95;
  CorrelationModel model = CorrelationModel::gaussian;

  static LinkConfig from_db(double db, double coherence,
                            CorrelationModel model = CorrelationModel::gaussian);
  /// Throws std::invalid_argument on a non-positive power or out-of-range coherence.
  void validate() const;
};

/// Squared magnitudes |h(t)|^2, unit mean.
struct ChannelRealization {
  std::vector<double> gains;
};

struct InterferenceTrace {
  /// Slot indices, 1-based.
  std::vector<std::int64_t> times;
  std::vector<double> total;
  /// per_interferer[i][t] = P_i |h_i(t)|^2
  std::vector<std::vector<double>> per_interferer;

  std::size_t size() const { return total.size(); }
};

struct SinrSample {
  double desired_power = 0.0;
  double interference = 0.0;
  double sinr = 0.0;
};

/// FIR taps (unit energy) whose output has lag-1 correlation equal to
/// `coherence` exactly. coherence == 0 yields the single tap {1}.
std::vector<double> gaussian_doppler_taps(double coherence);

/// Unit-power circularly symmetric complex Gaussian amplitudes h(t).
std::vector<std::complex<double>> generate_complex_amplitudes(const LinkConfig& cfg,
                                                              std::size_t n_steps,
                                                              std::uint64_t seed);

ChannelRealization generate_rayleigh_gains(const LinkConfig& cfg, std::size_t n_steps,
                                           std::uint64_t seed);

/// Independent fading per interferer; interferer i draws from a seed derived
/// from (seed, i).
InterferenceTrace build_interference_trace(std::span<const LinkConfig> interferers,
                                           std::size_t n_steps, std::uint64_t seed);

SinrSample compute_sinr(const LinkConfig& desired, double desired_gain, double interference);

/// CSV with header `t,total,i1..iN,desired_gain`, one row per slot.
void write_trace_csv(std::ostream& os, const InterferenceTrace& trace,
                     std::span<const double> desired_gains);

}  // namespace ipred

/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp with identical
// signatures; tests assert the two agree and bench/ compares their speed.
// Outputs are written element-wise with no cross-iteration reductions, so
// the OpenMP versions are bit-identical to the serial ones.

#include <complex>
#include <cstddef>
#include <span>

namespace ipred::kernels {

namespace serial {

/// out(i, j) = sf^2 exp(-(a_i - b_j)^2 / (2 ell^2)), column-major with
/// leading dimension a.size().
void fill_rbf(std::span<const double> a, std::span<const double> b, double output_scale,
              double length_scale, std::span<double> out);

/// Valid-mode correlation: out[t] = sum_k taps[k] * in[t + k].
/// Requires out.size() == in.size() - taps.size() + 1.
void fir_filter(std::span<const std::complex<double>> in, std::span<const double> taps,
                std::span<std::complex<double>> out);

/// For every length-W window of `series` (W = weights.size()), the
/// window-mean-centred linear prediction mean + sum_j w_j (y_j - mean).
/// out.size() == series.size() - W + 1.
void sliding_window_apply(std::span<const double> series, std::span<const double> weights,
                          std::span<double> out);

}  // namespace serial

namespace omp {

void fill_rbf(std::span<const double> a, std::span<const double> b, double output_scale,
              double length_scale, std::span<double> out);
void fir_filter(std::span<const std::complex<double>> in, std::span<const double> taps,
                std::span<std::complex<double>> out);
void sliding_window_apply(std::span<const double> series, std::span<const double> weights,
                          std::span<double> out);

/// out[i] = fn(i) for i in [0, out.size()), iterations run concurrently.
template <typename Fn>
void map_indexed(std::span<double> out, Fn&& fn) {
  const auto n = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
}

}  // namespace omp

namespace serial {

template <typename Fn>
void map_indexed(std::span<double> out, Fn&& fn) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(i);
}

}  // namespace serial

}  // namespace ipred::kernels

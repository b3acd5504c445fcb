/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/kernels.hpp"

#include <cassert>
#include <cmath>

namespace ipred::kernels {

namespace {

inline double rbf(double x, double y, double variance, double inv_two_ell2) {
  const double d = x - y;
  return variance * std::exp(-d * d * inv_two_ell2);
}

inline std::complex<double> fir_at(std::span<const std::complex<double>> in,
                                   std::span<const double> taps, std::size_t t) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * in[t + k];
  return acc;
}

inline double window_at(std::span<const double> series, std::span<const double> w,
                        std::size_t s) {
  double mean = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) mean += series[s + j];
  mean /= static_cast<double>(w.size());
  double acc = mean;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * (series[s + j] - mean);
  return acc;
}

}  // namespace

namespace serial {

void fill_rbf(std::span<const double> a, std::span<const double> b, double output_scale,
              double length_scale, std::span<double> out) {
  assert(out.size() == a.size() * b.size());
  const double variance = output_scale * output_scale;
  const double inv = 1.0 / (2.0 * length_scale * length_scale);
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < a.size(); ++i) out[j * a.size() + i] = rbf(a[i], b[j], variance, inv);
}

void fir_filter(std::span<const std::complex<double>> in, std::span<const double> taps,
                std::span<std::complex<double>> out) {
  assert(in.size() + 1 == out.size() + taps.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = fir_at(in, taps, t);
}

void sliding_window_apply(std::span<const double> series, std::span<const double> weights,
                          std::span<double> out) {
  assert(series.size() + 1 == out.size() + weights.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = window_at(series, weights, s);
}

}  // namespace serial

namespace omp {

void fill_rbf(std::span<const double> a, std::span<const double> b, double output_scale,
              double length_scale, std::span<double> out) {
  assert(out.size() == a.size() * b.size());
  const double variance = output_scale * output_scale;
  const double inv = 1.0 / (2.0 * length_scale * length_scale);
  const auto cols = static_cast<long>(b.size());
#pragma omp parallel for
  for (long j = 0; j < cols; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    for (std::size_t i = 0; i < a.size(); ++i) out[jj * a.size() + i] = rbf(a[i], b[jj], variance, inv);
  }
}

void fir_filter(std::span<const std::complex<double>> in, std::span<const double> taps,
                std::span<std::complex<double>> out) {
  assert(in.size() + 1 == out.size() + taps.size());
  const auto n = static_cast<long>(out.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < n; ++t) out[static_cast<std::size_t>(t)] = fir_at(in, taps, static_cast<std::size_t>(t));
}

void sliding_window_apply(std::span<const double> series, std::span<const double> weights,
                          std::span<double> out) {
  assert(series.size() + 1 == out.size() + weights.size());
  const auto n = static_cast<long>(out.size());
#pragma omp parallel for schedule(static)
  for (long s = 0; s < n; ++s)
    out[static_cast<std::size_t>(s)] = window_at(series, weights, static_cast<std::size_t>(s));
}

}  // namespace omp

}  // namespace ipred::kernels

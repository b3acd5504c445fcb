/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/blocklength.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace ipred {

namespace {

constexpr double kLog2e = std::numbers::log2e;

// Acklam's rational approximation to the standard normal quantile, relative
// error below 1.15e-9 before refinement.
double normal_quantile_approx(double p) {
  constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
  constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
  constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

void CodingSpec::validate() const {
  if (payload_bits < 1) throw std::invalid_argument(fmt::format("payload_bits must be >= 1, got {}", payload_bits));
  if (!(target_error > 0.0 && target_error < 0.5))
    throw std::invalid_argument(fmt::format("target_error must lie in (0, 0.5), got {}", target_error));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument(fmt::format("q_inverse needs p in (0, 1), got {}", p));
  if (p == 0.5) return 0.0;
  // Q^{-1}(p) = Phi^{-1}(1 - p) = -Phi^{-1}(p). Work on the smaller tail so
  // the residual Q(x) - p keeps full relative precision.
  const bool upper = p > 0.5;
  const double tail = upper ? 1.0 - p : p;
  double x = -normal_quantile_approx(tail);  // x > 0, Q(x) = tail
  // One Halley step on f(x) = Q(x) - tail, f' = -phi(x), f'' = x phi(x).
  const double e = q_function(x) - tail;
  const double u = e / normal_pdf(x);
  x += u / (1.0 + 0.5 * x * u);
  return upper ? -x : x;
}

double capacity(double delta) { return std::log2(1.0 + delta); }

double dispersion(double delta) {
  const double inv = 1.0 / (1.0 + delta);
  return (1.0 - inv * inv) * kLog2e * kLog2e;
}

double channel_uses_closed_form(const CodingSpec& spec, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("closed-form channel uses need a positive SINR");
  const double d = static_cast<double>(spec.payload_bits);
  const double c = capacity(delta);
  const double qi = q_inverse(spec.target_error);
  const double qv = qi * qi * dispersion(delta);
  if (qv == 0.0) return d / c;
  return d / c + qv / (2.0 * c * c) * (1.0 + std::sqrt(1.0 + 4.0 * d * c / qv));
}

double achieved_error(const CodingSpec& spec, std::int64_t r, double delta) {
  if (r < 1) throw std::invalid_argument(fmt::format("channel uses must be >= 1, got {}", r));
  const double rr = static_cast<double>(r);
  const double d = static_cast<double>(spec.payload_bits);
  const double c = capacity(delta);
  const double v = dispersion(delta);
  const double margin = rr * c - d;
  if (v == 0.0) {
    if (margin < 0.0) return 1.0;
    if (margin > 0.0) return 0.0;
    return 0.5;
  }
  return q_function(margin / std::sqrt(rr * v));
}

std::optional<Allocation> required_channel_uses(const CodingSpec& spec, double delta_p) {
  spec.validate();
  if (!(delta_p >= 0.0)) throw std::invalid_argument("predicted SINR must be non-negative");
  if (delta_p == 0.0) return std::nullopt;

  Allocation out;
  out.predicted_sinr = delta_p;
  out.closed_form = channel_uses_closed_form(spec, delta_p);
  if (!(out.closed_form <= kMaxChannelUses)) return std::nullopt;
  std::int64_t r = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(out.closed_form)));
  while (achieved_error(spec, r, delta_p) > spec.target_error) ++r;
  while (r > 1 && achieved_error(spec, r - 1, delta_p) <= spec.target_error) --r;
  out.channel_uses = r;
  return out;
}

}  // namespace ipred

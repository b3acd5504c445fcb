/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace ipred {

using Rng = std::mt19937_64;

/// Named seed streams. New experiments append new ids; existing ids never move.
enum class Stream : std::uint64_t {
  interference = 1,
  desired_link = 2,
  prior_paths = 3,
  predictor_noise = 4,
  decode_draws = 5,
  synthetic = 6,
};

/// Counter-based seed derivation: splitmix64 finalizer over (master, stream, index).
/// Seeds for distinct (stream, index) pairs are independent of how many other
/// pairs are derived.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Circularly symmetric complex Gaussian with E|z|^2 = 1.
std::complex<double> complex_normal(Rng& rng);

}  // namespace ipred

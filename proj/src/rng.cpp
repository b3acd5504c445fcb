/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/rng.hpp"

#include <cmath>

namespace ipred {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) + index);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
  return derive_seed(master, static_cast<std::uint64_t>(stream), index);
}

std::complex<double> complex_normal(Rng& rng) {
  // Each quadrature carries half the power.
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace ipred

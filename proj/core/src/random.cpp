// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/random.hpp"

#include <cmath>

namespace stin {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = splitmix64(base);
  for (auto k : keys) s = splitmix64(s ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return s;
}

// The std distributions are implementation-defined; these are not, so
// streams stay identical across standard libraries.
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double std_normal(Rng& rng) {
  // Box-Muller, one value per call. u1 in (0, 1] keeps log finite.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::complex<double> complex_normal(Rng& rng, double var) {
  const double s = std::sqrt(var / 2.0);
  const double re = std_normal(rng);
  const double im = std_normal(rng);
  return {s * re, s * im};
}

}  // namespace stin

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace stin {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Counter-style split: mixes every key into the base seed. Order matters.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

double uniform01(Rng& rng);
double std_normal(Rng& rng);

// Circularly-symmetric complex Gaussian CN(0, var).
std::complex<double> complex_normal(Rng& rng, double var);

}  // namespace stin

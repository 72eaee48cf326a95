// SPDX-License-Identifier: Apache-2.0
//
// rischan - small-scale channel modeling toolkit for RIS-assisted links
// Copyright (C) 2026 the rischan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rischan {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Independent deterministic substream for (seed, stream). Drop i of an
/// ensemble uses stream i, so generation is reproducible and order-independent
/// under parallel execution.
inline std::mt19937_64 substream_rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix64(s);
    s = seed ^ (stream + 0x632BE59BD9B4E019ull);
    const std::uint64_t b = splitmix64(s);
    return std::mt19937_64(a ^ (b * 0xFF51AFD7ED558CCDull));
}

// Explicit inverse-CDF / Box-Muller draws so the sampling sequence is fixed by
// this header, not by the standard library's distribution internals.

/// Uniform in [0, 1) with 53-bit resolution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Exponential with the given mean (inverse CDF; strictly positive result).
inline double draw_exponential(std::mt19937_64& rng, double mean) {
    return -mean * std::log1p(-uniform01(rng));
}

inline double draw_normal(std::mt19937_64& rng, double mu, double sigma) {
    if (sigma <= 0.0) return mu;
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * std::numbers::pi * u2);
}

/// Knuth product method; fine for the small means used here.
inline std::uint64_t draw_poisson(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= 1.0 - uniform01(rng);
    } while (p > limit);
    return k - 1;
}

/// Rayleigh magnitude with unit mean (E[R] = 1, E[R^2] = 4/pi).
inline double draw_rayleigh_unit_mean(std::mt19937_64& rng) {
    const double sigma = std::sqrt(2.0 / std::numbers::pi);  // mode parameter
    return sigma * std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
}

/// Uniform phase in [0, 2*pi).
inline double draw_phase(std::mt19937_64& rng) {
    return 2.0 * std::numbers::pi * uniform01(rng);
}

}  // namespace rischan

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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "rischan/dsp.hpp"
#include "rischan/rng.hpp"
#include "rischan/types.hpp"

// Shared fixture builders and independent oracles for the unit and
// acceptance suites. Oracles here never call the implementation paths they
// are used to check.

namespace fixtures {

using rischan::cplx;

/// Ideal single-path sweep H(f) = exp(-j 2 pi f tau).
inline rischan::FrequencySweep single_path_sweep(const rischan::FrequencyGrid& grid,
                                                 double delay_ns) {
    rischan::FrequencySweep s;
    s.grid = grid;
    s.gains.resize(grid.n_points);
    for (std::size_t k = 0; k < grid.n_points; ++k)
        s.gains[k] = std::polar(
            1.0, -2.0 * std::numbers::pi * grid.frequency_hz(k) * delay_ns * 1.0e-9);
    return s;
}

/// Sweep whose 19 subband means are i.i.d. Rician with the given K: each
/// 10-point subband holds one constant realization (unit mean power).
inline rischan::FrequencySweep rician_subband_sweep(double k_db, std::mt19937_64& rng) {
    rischan::FrequencySweep s;
    s.grid = rischan::default_grid();
    s.gains.resize(s.grid.n_points);
    const double k = rischan::db_to_linear(k_db);
    const double los = std::sqrt(k / (k + 1.0));
    const double sigma = std::sqrt(0.5 / (k + 1.0));
    for (std::size_t i = 0; i < 19; ++i) {
        const cplx g{los + sigma * rischan::draw_normal(rng, 0.0, 1.0),
                     sigma * rischan::draw_normal(rng, 0.0, 1.0)};
        for (std::size_t j = 0; j < 10; ++j) s.gains[i * 10 + j] = g;
    }
    s.gains[190] = cplx{los, 0.0};
    return s;
}

/// Moment ratio gamma corresponding to a Rician K (for oracle checks).
inline double gamma_of_k_linear(double k) { return (2.0 * k + 1.0) / ((k + 1.0) * (k + 1.0)); }

/// Synthetic PDP with clusters of isolated peaks over a near-flat noise
/// floor. Peak positions are drawn within [base, base+span) per cluster, at
/// least 3 bins apart so each is a local maximum.
inline rischan::Pdp clustered_pdp(std::mt19937_64& rng, const std::vector<double>& cluster_bases,
                                  double span_ns, int peaks_min = 5, int peaks_max = 8) {
    const std::size_t n = 764;
    const double step = 1000.0 / static_cast<double>(n);
    rischan::Pdp pdp;
    pdp.delays_ns.resize(n);
    pdp.powers.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pdp.delays_ns[i] = step * static_cast<double>(i);
        pdp.powers[i] = 1.0e-9 * (0.5 + rischan::uniform01(rng));  // ~ -90 dB floor
    }
    for (double base : cluster_bases) {
        const int peaks =
            peaks_min + static_cast<int>(rischan::uniform01(rng) * (peaks_max - peaks_min + 1));
        std::set<long> used;
        int placed = 0;
        while (placed < peaks) {
            const long bin =
                std::llround((base + span_ns * rischan::uniform01(rng)) / step);
            bool clear = bin > 2 && bin + 2 < static_cast<long>(n);
            for (long u : used) clear = clear && std::labs(u - bin) >= 3;
            if (!clear) continue;
            used.insert(bin);
            pdp.powers[static_cast<std::size_t>(bin)] =
                rischan::db_to_linear(-20.0 - 20.0 * rischan::uniform01(rng));
            ++placed;
        }
    }
    return pdp;
}

/// SSE of one contiguous segment [lo, hi) of sorted values.
inline double segment_sse(const std::vector<double>& d, std::size_t lo, std::size_t hi) {
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += d[i];
    mean /= static_cast<double>(hi - lo);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += (d[i] - mean) * (d[i] - mean);
    return s;
}

/// Exhaustive minimum SSE over all k-partitions of 1-D points (optimal
/// partitions are contiguous in sorted order, so all split positions are
/// enumerated). Supports k in {1, 2, 3}.
inline double brute_force_min_sse(std::vector<double> d, int k) {
    std::sort(d.begin(), d.end());
    const std::size_t n = d.size();
    if (k == 1) return segment_sse(d, 0, n);
    double best = std::numeric_limits<double>::infinity();
    if (k == 2) {
        for (std::size_t s = 1; s < n; ++s)
            best = std::min(best, segment_sse(d, 0, s) + segment_sse(d, s, n));
    } else {
        for (std::size_t s1 = 1; s1 + 1 < n; ++s1)
            for (std::size_t s2 = s1 + 1; s2 < n; ++s2)
                best = std::min(best, segment_sse(d, 0, s1) + segment_sse(d, s1, s2) +
                                          segment_sse(d, s2, n));
    }
    return best;
}

inline rischan::MpcSet mpcs_at(const std::vector<double>& delays_ns, double amplitude = 1.0) {
    rischan::MpcSet m;
    for (double t : delays_ns) m.push_back({t, amplitude, {}});
    return m;
}

}  // namespace fixtures

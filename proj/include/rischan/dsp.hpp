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
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "rischan/types.hpp"

// Sweep-to-delay-domain frontend: back-to-back calibration, Hann-windowed
// inverse transform, power delay profile, and threshold-based MPC detection.
// All functions are pure; parallelize across sweeps as needed.

namespace rischan {

/// Back-to-back calibration responses. All three share the target grid and
/// must have nonzero magnitude everywhere.
struct CalibrationSet {
    FrequencySweep system_resp;      // G(f)
    FrequencySweep tx_antenna_resp;  // Gt(f)
    FrequencySweep rx_antenna_resp;  // Gr(f)
};

/// MPC detector settings. The noise floor is the median power over the
/// trailing noise_tail_fraction of delay bins; a candidate must clear that
/// floor by threshold_above_noise_db and sit within max_dynamic_range_db of
/// the strongest bin.
struct DetectionConfig {
    double noise_tail_fraction = 0.2;       // in (0, 0.5)
    double threshold_above_noise_db = 6.0;  // > 0
    double max_dynamic_range_db = 25.0;     // > 0
};

/// H(f) = Hv(f) / (G(f) Gt(f) Gr(f)), pointwise.
inline FrequencySweep calibrate(const FrequencySweep& raw, const CalibrationSet& cal) {
    for (const FrequencySweep* s : {&cal.system_resp, &cal.tx_antenna_resp, &cal.rx_antenna_resp})
        if (s->grid != raw.grid)
            throw GridMismatch("calibrate: calibration grid differs from sweep grid");
    FrequencySweep out;
    out.grid = raw.grid;
    out.label = raw.label;
    out.gains.resize(raw.gains.size());
    for (std::size_t k = 0; k < raw.gains.size(); ++k) {
        const cplx denom =
            cal.system_resp.gains[k] * cal.tx_antenna_resp.gains[k] * cal.rx_antenna_resp.gains[k];
        if (std::abs(cal.system_resp.gains[k]) == 0.0 ||
            std::abs(cal.tx_antenna_resp.gains[k]) == 0.0 ||
            std::abs(cal.rx_antenna_resp.gains[k]) == 0.0)
            throw ZeroCalibrationSample(
                "calibrate: zero-magnitude calibration sample at index " + std::to_string(k), k);
        out.gains[k] = raw.gains[k] / denom;
    }
    return out;
}

/// Symmetric Hann weights w[k] = 0.5 (1 - cos(2 pi k / (n-1))); [1] for n = 1.
inline std::vector<double> hann_window(std::size_t n) {
    if (n == 0) throw TooFewPoints("hann_window: n must be >= 1");
    if (n == 1) return {1.0};
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(n - 1)));
    return w;
}

/// Inverse transform of the Hann-weighted sweep onto a delay grid of
/// n_points * zero_pad_factor bins covering the unambiguous span 1/spacing.
///
/// Convention (fixed project-wide): with X[k] = H[k] w[k] and M output bins,
///   taps[m] = (1/M) sum_k X[k] exp(+j 2 pi f_k tau_m),   tau_m = m / (M df).
/// At zero_pad_factor 1 this is the plain normalized inverse DFT, so
/// sum|taps|^2 = (1/n) sum|X|^2 and the forward model of cir_to_ctf inverts
/// it exactly.
inline ImpulseResponse ctf_to_cir(const FrequencySweep& ctf, unsigned zero_pad_factor = 1) {
    if (!ctf.grid.valid() || ctf.gains.size() != ctf.grid.n_points)
        throw GridMismatch("ctf_to_cir: sweep inconsistent with its grid");
    if (zero_pad_factor < 1) throw Error("ctf_to_cir: zero_pad_factor must be >= 1");

    const std::size_t n = ctf.grid.n_points;
    const std::size_t m_bins = n * zero_pad_factor;
    const double df = ctf.grid.spacing_hz();
    const double step_s = 1.0 / (static_cast<double>(m_bins) * df);

    const std::vector<double> w = hann_window(n);
    std::vector<cplx> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = ctf.gains[k] * w[k];

    ImpulseResponse cir;
    cir.delay_step_ns = step_s * 1.0e9;
    cir.t0_ns = 0.0;
    cir.taps.resize(m_bins);

    const double f0 = ctf.grid.start_hz;
    const double two_pi = 2.0 * std::numbers::pi;
    const double inv_m = 1.0 / static_cast<double>(m_bins);
    for (std::size_t m = 0; m < m_bins; ++m) {
        const double tau = static_cast<double>(m) * step_s;
        // Horner evaluation of sum_k x[k] wm^k with wm = exp(+j 2 pi df tau)
        const cplx wm = std::polar(1.0, two_pi * df * tau);
        cplx acc = x[n - 1];
        for (std::size_t k = n - 1; k-- > 0;) acc = acc * wm + x[k];
        cir.taps[m] = acc * std::polar(inv_m, two_pi * f0 * tau);
    }
    return cir;
}

/// PDP = |h|^2 per bin. noise_floor stays 0 until a detector estimates it.
inline Pdp compute_pdp(const ImpulseResponse& cir) {
    Pdp pdp;
    pdp.delays_ns.resize(cir.taps.size());
    pdp.powers.resize(cir.taps.size());
    for (std::size_t k = 0; k < cir.taps.size(); ++k) {
        pdp.delays_ns[k] = cir.delay_ns(k);
        pdp.powers[k] = std::norm(cir.taps[k]);
    }
    return pdp;
}

/// Median power over the trailing tail_fraction of delay bins.
inline double estimate_noise_floor(const Pdp& pdp, double tail_fraction) {
    if (pdp.powers.empty()) throw TooFewPoints("estimate_noise_floor: empty PDP");
    if (!(tail_fraction > 0.0 && tail_fraction < 0.5))
        throw Error("estimate_noise_floor: tail_fraction must be in (0, 0.5)");
    const std::size_t n = pdp.powers.size();
    const std::size_t tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(tail_fraction * static_cast<double>(n))));
    std::vector<double> t(pdp.powers.end() - static_cast<std::ptrdiff_t>(tail), pdp.powers.end());
    std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end());
    double med = t[t.size() / 2];
    if (t.size() % 2 == 0) {
        const double lower = *std::max_element(
            t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2));
        med = 0.5 * (med + lower);
    }
    return med;
}

/// Local-maximum MPC detection against the trailing-bins noise floor.
/// A bin qualifies if it is a local maximum, exceeds
/// floor * 10^(threshold/10), and lies within max_dynamic_range_db of the
/// global peak. Raising the threshold can only remove MPCs. When a source CIR
/// is supplied, the matching complex taps are attached to the detections.
inline MpcSet detect_mpcs(const Pdp& pdp, const DetectionConfig& cfg,
                          const ImpulseResponse* cir = nullptr) {
    const std::size_t n = pdp.powers.size();
    if (n == 0) throw TooFewPoints("detect_mpcs: empty PDP");
    if (cir && cir->taps.size() != n)
        throw GridMismatch("detect_mpcs: CIR length differs from PDP length");

    const double floor = estimate_noise_floor(pdp, cfg.noise_tail_fraction);
    const double peak = *std::max_element(pdp.powers.begin(), pdp.powers.end());
    const double min_power = std::max(floor * db_to_linear(cfg.threshold_above_noise_db),
                                      peak * db_to_linear(-cfg.max_dynamic_range_db));

    auto is_local_max = [&](std::size_t k) {
        const bool left_ok = (k == 0) || pdp.powers[k] > pdp.powers[k - 1];
        const bool right_ok = (k == n - 1) || pdp.powers[k] >= pdp.powers[k + 1];
        return left_ok && right_ok;
    };

    MpcSet out;
    for (std::size_t k = 0; k < n; ++k) {
        if (pdp.powers[k] <= min_power) continue;
        if (!is_local_max(k)) continue;
        Mpc m;
        m.delay_ns = pdp.delays_ns[k];
        m.amplitude = std::sqrt(pdp.powers[k]);
        if (cir) m.complex_gain = cir->taps[k];
        out.push_back(m);
    }
    if (out.empty()) throw EmptyResult("detect_mpcs: no bin exceeds the detection threshold");
    return out;
}

}  // namespace rischan

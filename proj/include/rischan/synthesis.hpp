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
#include <limits>
#include <numbers>
#include <thread>
#include <variant>
#include <vector>

#include "rischan/rng.hpp"
#include "rischan/types.hpp"

// Stochastic drop generation: the channel is an unfaded virtual-LOS tap plus
// clustered stochastic MPCs. Each cluster has a central ray with exponential
// pre-/post-cursor amplitude envelopes and Poisson cursor arrivals; per-drop
// LOS/scatter power split follows the drawn Rician K.

namespace rischan {

struct SynthesisConfig {
    std::uint64_t seed = 0;
    std::size_t n_drops = 1;
    double ray_truncation_db = 30.0;     // cursor cut: envelope this far below the center
    std::size_t cluster_truncation = 4;  // max clusters per drop
    FrequencyGrid output_grid = default_grid();
    bool ray_fading = true;  // false: diagnostic mode, amplitudes equal the envelope
};

/// One drawn ray. Amplitudes are in relative (pre-normalization) units;
/// multiply by GroundTruth::ray_scale for CIR units.
struct RayDraw {
    double rel_delay_ns = 0.0;  // relative to the cluster center, pre < 0 < post
    double envelope = 0.0;      // exponential envelope value at this delay
    double amplitude = 0.0;     // envelope x Rayleigh magnitude (== envelope when fading is off)
    double phase_rad = 0.0;
};

struct ClusterDraw {
    double delay_ns = 0.0;          // central-ray absolute delay
    double anchor_amplitude = 0.0;  // envelope anchor A(0), relative units
    RayDraw center;
    std::vector<RayDraw> pre;   // in arrival order walking away from the center
    std::vector<RayDraw> post;  // in arrival order
};

/// Record of every drawn value for one drop. los_amplitude and ray_scale are
/// in final CIR units and are filled by assemble_cir; with them the CIR is
/// exactly reproducible from this record.
struct GroundTruth {
    double k_db = 0.0;
    double los_delay_ns = 0.0;
    double los_amplitude = 0.0;
    double ray_scale = 0.0;
    std::vector<ClusterDraw> clusters;
    // Inherent Tx-Rx NLOS clusters (the weak non-RIS scatter). Not generated;
    // kept in the schema for extension.
    std::vector<ClusterDraw> background_clusters;

    double k_linear() const { return db_to_linear(k_db); }
};

struct SynthesizedDrop {
    ImpulseResponse cir;
    GroundTruth ground_truth;
};

/// A drop is either a measured sweep or a synthesized CIR with ground truth.
using Drop = std::variant<FrequencySweep, SynthesizedDrop>;

struct DropEnsemble {
    std::vector<Drop> drops;
    std::string scenario;
    std::string mode;
};

/// Observation window on one cursor side: the envelope reaches trunc_db below
/// the center at gamma * ln(10^(trunc_db/20)).
inline double cursor_window_ns(double decay_time_ns, double trunc_db) {
    return decay_time_ns * trunc_db * std::numbers::ln10 / 20.0;
}

namespace detail {

/// Minimum center-to-center spacing that keeps adjacent clusters disjoint in
/// delay. Inter-arrivals are drawn as this offset plus an exponential whose
/// mean preserves the configured mean arrival time.
inline double min_cluster_separation(const IntraClusterParams& intra, double trunc_db,
                                     double mean_arrival_ns) {
    const double extent = cursor_window_ns(intra.pre.power_decay_time_ns, trunc_db) +
                          cursor_window_ns(intra.post.power_decay_time_ns, trunc_db);
    return std::min(1.2 * extent, 0.75 * mean_arrival_ns);
}

inline RayDraw draw_ray(std::mt19937_64& rng, double rel_delay_ns, double envelope, bool fading) {
    RayDraw r;
    r.rel_delay_ns = rel_delay_ns;
    r.envelope = envelope;
    const double mag = fading ? draw_rayleigh_unit_mean(rng) : 1.0;
    const double phase = draw_phase(rng);
    r.amplitude = envelope * mag;
    r.phase_rad = phase;
    return r;
}

}  // namespace detail

/// Draws one drop's structure. Order of draws: K; cluster count; cluster
/// inter-arrivals; per cluster (center, pre cursors, post cursors) with one
/// (magnitude, phase) pair per ray. Requires cluster and intra-cluster blocks.
inline GroundTruth draw_structure(const ScenarioParams& params, const SynthesisConfig& cfg,
                                  std::mt19937_64& rng) {
    if (!params.inter || !params.intra)
        throw MissingClusterModel("draw_structure: preset carries no cluster model (KF only)");
    const InterClusterParams& inter = *params.inter;
    const IntraClusterParams& intra = *params.intra;

    GroundTruth gt;
    gt.los_delay_ns = params.los_delay_ns;
    gt.k_db = draw_normal(rng, params.kf.mu_db, params.kf.sigma_db);

    std::size_t n_clusters = 1 + static_cast<std::size_t>(
                                     draw_poisson(rng, inter.avg_num_clusters - 1.0));
    n_clusters = std::min(n_clusters, cfg.cluster_truncation);

    const double mean_gap = inter.mean_cluster_arrival_time_ns;
    const double d_min = detail::min_cluster_separation(intra, cfg.ray_truncation_db, mean_gap);
    const double span_limit =
        0.95 * cfg.output_grid.unambiguous_span_ns() -
        cursor_window_ns(intra.post.power_decay_time_ns, cfg.ray_truncation_db);

    std::vector<double> delays{params.los_delay_ns};
    for (std::size_t m = 1; m < n_clusters; ++m) {
        const double gap = (mean_gap > d_min)
                               ? d_min + draw_exponential(rng, mean_gap - d_min)
                               : draw_exponential(rng, mean_gap);
        const double delay = delays.back() + gap;
        if (delay > span_limit) break;  // beyond the observable window
        delays.push_back(delay);
    }

    const double t_pre = cursor_window_ns(intra.pre.power_decay_time_ns, cfg.ray_truncation_db);
    const double t_post = cursor_window_ns(intra.post.power_decay_time_ns, cfg.ray_truncation_db);

    for (double delay : delays) {
        ClusterDraw c;
        c.delay_ns = delay;
        // cluster-center power decays exponentially with excess delay
        c.anchor_amplitude =
            std::exp(-0.5 * inter.cluster_power_decay_per_ns * (delay - delays.front()));
        // the central ray carries the envelope anchor deterministically (only
        // its phase is random); cursor rays fade around the envelope
        c.center = detail::draw_ray(rng, 0.0, c.anchor_amplitude, false);

        double cum = draw_exponential(rng, 1.0 / intra.pre.arrival_rate_per_ns);
        while (cum <= t_pre) {
            const double env = c.anchor_amplitude *
                               std::exp(-cum / intra.pre.power_decay_time_ns);
            c.pre.push_back(detail::draw_ray(rng, -cum, env, cfg.ray_fading));
            cum += draw_exponential(rng, 1.0 / intra.pre.arrival_rate_per_ns);
        }
        cum = draw_exponential(rng, 1.0 / intra.post.arrival_rate_per_ns);
        while (cum <= t_post) {
            const double env = c.anchor_amplitude *
                               std::exp(-cum / intra.post.power_decay_time_ns);
            c.post.push_back(detail::draw_ray(rng, cum, env, cfg.ray_fading));
            cum += draw_exponential(rng, 1.0 / intra.post.arrival_rate_per_ns);
        }
        gt.clusters.push_back(std::move(c));
    }
    return gt;
}

namespace detail {

template <typename Fn>
inline void for_each_ray(const GroundTruth& gt, Fn&& fn) {
    for (const ClusterDraw& c : gt.clusters) {
        for (auto it = c.pre.rbegin(); it != c.pre.rend(); ++it) fn(c, *it);
        fn(c, c.center);
        for (const RayDraw& r : c.post) fn(c, r);
    }
}

}  // namespace detail

/// Places the LOS tap and all rays on the output delay grid (nearest bin,
/// coherent addition on collision) and normalizes.
///
/// The LOS component carries K/(K+1) of the power and the rays 1/(K+1),
/// using the drawn K of this drop; a final common rescale sets the total tap
/// power to exactly 1, which preserves the component power ratio. Fills
/// gt.los_amplitude and gt.ray_scale (final CIR units).
inline ImpulseResponse assemble_cir(GroundTruth& gt, const FrequencyGrid& grid) {
    if (!grid.valid()) throw GridMismatch("assemble_cir: invalid output grid");
    const std::size_t n = grid.n_points;
    const double step_ns = grid.unambiguous_span_ns() / static_cast<double>(n);

    ImpulseResponse cir;
    cir.delay_step_ns = step_ns;
    cir.t0_ns = 0.0;
    cir.taps.assign(n, cplx{0.0, 0.0});

    auto bin_of = [&](double delay_ns) {
        const auto b = static_cast<std::ptrdiff_t>(std::llround(delay_ns / step_ns));
        if (b < 0 || b >= static_cast<std::ptrdiff_t>(n))
            throw DelayOutOfRange("assemble_cir: delay outside the unambiguous span");
        return static_cast<std::size_t>(b);
    };

    const double k_lin = gt.k_linear();
    double los_amp = 1.0;
    double ray_scale = 0.0;
    if (std::isinf(k_lin)) {
        los_amp = 1.0;  // degenerate Rician: single LOS tap
    } else {
        double ray_power = 0.0;
        detail::for_each_ray(
            gt, [&](const ClusterDraw&, const RayDraw& r) { ray_power += r.amplitude * r.amplitude; });
        los_amp = std::sqrt(k_lin / (k_lin + 1.0));
        ray_scale = ray_power > 0.0 ? std::sqrt(1.0 / ((k_lin + 1.0) * ray_power)) : 0.0;
    }

    cir.taps[bin_of(gt.los_delay_ns)] += los_amp;
    if (ray_scale > 0.0) {
        detail::for_each_ray(gt, [&](const ClusterDraw& c, const RayDraw& r) {
            cir.taps[bin_of(c.delay_ns + r.rel_delay_ns)] +=
                std::polar(ray_scale * r.amplitude, r.phase_rad);
        });
    }

    double total = 0.0;
    for (const cplx& t : cir.taps) total += std::norm(t);
    const double rescale = 1.0 / std::sqrt(total);
    for (cplx& t : cir.taps) t *= rescale;

    gt.los_amplitude = los_amp * rescale;
    gt.ray_scale = ray_scale * rescale;
    return cir;
}

/// Re-places LOS and rays using the stored (normalized) scales; reproduces
/// the assemble_cir output exactly.
inline ImpulseResponse rebuild_cir(const GroundTruth& gt, const FrequencyGrid& grid) {
    const std::size_t n = grid.n_points;
    const double step_ns = grid.unambiguous_span_ns() / static_cast<double>(n);
    ImpulseResponse cir;
    cir.delay_step_ns = step_ns;
    cir.t0_ns = 0.0;
    cir.taps.assign(n, cplx{0.0, 0.0});
    auto bin_of = [&](double delay_ns) {
        return static_cast<std::size_t>(std::llround(delay_ns / step_ns));
    };
    cir.taps[bin_of(gt.los_delay_ns)] += gt.los_amplitude;
    detail::for_each_ray(gt, [&](const ClusterDraw& c, const RayDraw& r) {
        cir.taps[bin_of(c.delay_ns + r.rel_delay_ns)] +=
            std::polar(gt.ray_scale * r.amplitude, r.phase_rad);
    });
    return cir;
}

/// The drawn stochastic MPCs of one drop (cluster rays in final CIR units,
/// sorted by delay). The deterministic LOS tap is not part of the MPC set;
/// it is accounted for by the K-factor.
inline MpcSet mpcs_from_ground_truth(const GroundTruth& gt) {
    MpcSet mpcs;
    detail::for_each_ray(gt, [&](const ClusterDraw& c, const RayDraw& r) {
        Mpc m;
        m.delay_ns = c.delay_ns + r.rel_delay_ns;
        m.amplitude = gt.ray_scale * r.amplitude;
        m.complex_gain = std::polar(m.amplitude, r.phase_rad);
        mpcs.push_back(m);
    });
    std::sort(mpcs.begin(), mpcs.end(),
              [](const Mpc& a, const Mpc& b) { return a.delay_ns < b.delay_ns; });
    return mpcs;
}

/// Realized LOS-to-scatter power ratio of one drop, from the stored CIR-unit
/// components. Equals the drawn K up to rounding.
inline double realized_kf_linear(const GroundTruth& gt) {
    double ray_power = 0.0;
    detail::for_each_ray(gt, [&](const ClusterDraw&, const RayDraw& r) {
        const double a = gt.ray_scale * r.amplitude;
        ray_power += a * a;
    });
    if (ray_power == 0.0) return std::numeric_limits<double>::infinity();
    return gt.los_amplitude * gt.los_amplitude / ray_power;
}

/// Exact forward transform H[k] = sum_taps h exp(-j 2 pi f_k tau); no window.
inline FrequencySweep cir_to_ctf(const ImpulseResponse& cir, const FrequencyGrid& grid) {
    if (!grid.valid()) throw GridMismatch("cir_to_ctf: invalid grid");
    const double span_ns = grid.unambiguous_span_ns();
    if (cir.t0_ns < 0.0 || cir.delay_ns(cir.taps.size() - 1) >= span_ns)
        throw DelayOutOfRange("cir_to_ctf: CIR delays outside the unambiguous span");

    FrequencySweep out;
    out.grid = grid;
    out.gains.assign(grid.n_points, cplx{0.0, 0.0});
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t m = 0; m < cir.taps.size(); ++m) {
        if (cir.taps[m] == cplx{0.0, 0.0}) continue;
        const double tau_s = cir.delay_ns(m) * 1.0e-9;
        for (std::size_t k = 0; k < grid.n_points; ++k)
            out.gains[k] += cir.taps[m] * std::polar(1.0, -two_pi * grid.frequency_hz(k) * tau_s);
    }
    return out;
}

/// n_drops independent drops; drop i uses the deterministic substream
/// (seed, i), so results are reproducible and order-independent, including
/// under parallel generation.
inline DropEnsemble synthesize_ensemble(const ScenarioParams& params, const SynthesisConfig& cfg,
                                        unsigned n_threads = 1) {
    if (cfg.n_drops < 1) throw Error("synthesize_ensemble: n_drops must be >= 1");
    if (!params.inter || !params.intra)
        throw MissingClusterModel("synthesize_ensemble: preset carries no cluster model");

    std::vector<SynthesizedDrop> drops(cfg.n_drops);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::mt19937_64 rng = substream_rng(cfg.seed, i);
            GroundTruth gt = draw_structure(params, cfg, rng);
            ImpulseResponse cir = assemble_cir(gt, cfg.output_grid);
            drops[i] = SynthesizedDrop{std::move(cir), std::move(gt)};
        }
    };

    if (n_threads <= 1) {
        worker(0, cfg.n_drops);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.n_drops + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::size_t b = std::min<std::size_t>(t * chunk, cfg.n_drops);
            const std::size_t e = std::min<std::size_t>(b + chunk, cfg.n_drops);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    DropEnsemble ens;
    ens.scenario = to_string(params.scenario);
    ens.mode = to_string(params.mode);
    ens.drops.reserve(cfg.n_drops);
    for (auto& d : drops) ens.drops.emplace_back(std::move(d));
    return ens;
}

}  // namespace rischan

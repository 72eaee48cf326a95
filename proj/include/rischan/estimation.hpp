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
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "rischan/clustering.hpp"
#include "rischan/dsp.hpp"
#include "rischan/synthesis.hpp"
#include "rischan/types.hpp"

// Parameter estimation: moment-based K-factor over narrowband subbands,
// Gaussian KF fits, inter-cluster statistics, cursor envelope/rate fits, and
// the drop-ensemble pipeline tying them together.

namespace rischan {

/// Subband partition for narrowband fading realizations.
struct SubbandConfig {
    std::size_t n_subbands = 19;
    double subband_width_hz = 10.0e6;
};

/// Moment-based Rician K estimate from narrowband realizations:
/// gamma = Var[|g|^2] / E[|g|^2]^2 (unbiased sample variance), and
/// K = sqrt(1-gamma) / (1 - sqrt(1-gamma)). gamma >= 1 clamps to K = 0;
/// gamma <= 0 (no variation) yields the +inf sentinel.
inline double moment_kf_linear(std::span<const cplx> realizations) {
    const std::size_t n = realizations.size();
    if (n < 2) throw TooFewSamples("moment_kf_linear: need at least 2 realizations");
    double mean = 0.0;
    for (const cplx& g : realizations) mean += std::norm(g);
    mean /= static_cast<double>(n);
    if (mean == 0.0) return 0.0;
    double var = 0.0;
    for (const cplx& g : realizations) {
        const double d = std::norm(g) - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);
    const double gamma = var / (mean * mean);
    if (gamma <= 0.0) return std::numeric_limits<double>::infinity();
    if (gamma >= 1.0) return 0.0;
    const double c = std::sqrt(1.0 - gamma);
    return c / (1.0 - c);
}

inline double moment_kf_db(std::span<const cplx> realizations) {
    return linear_to_db(moment_kf_linear(realizations));
}

/// Narrowband fading realizations of one sweep: the band is split into
/// n_subbands adjacent subbands (trailing grid points beyond the partition
/// are dropped, e.g. the 191st point of the default grid) and each subband's
/// mean complex gain forms one realization.
inline std::vector<cplx> subband_realizations(const FrequencySweep& ctf,
                                              const SubbandConfig& cfg = {}) {
    if (!ctf.grid.valid() || ctf.gains.size() != ctf.grid.n_points)
        throw GridMismatch("subband_realizations: sweep inconsistent with its grid");
    const double per = cfg.subband_width_hz / ctf.grid.spacing_hz();
    const auto points_per_subband = static_cast<std::size_t>(std::llround(per));
    if (points_per_subband < 1 || std::abs(per - static_cast<double>(points_per_subband)) > 1e-6)
        throw GridMismatch("subband_realizations: subband width is not a multiple of the spacing");
    if (cfg.n_subbands * points_per_subband > ctf.grid.n_points)
        throw GridMismatch(
            "subband_realizations: grid does not support the requested subband partition");

    std::vector<cplx> g(cfg.n_subbands);
    for (std::size_t i = 0; i < cfg.n_subbands; ++i) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < points_per_subband; ++k)
            acc += ctf.gains[i * points_per_subband + k];
        g[i] = acc / static_cast<double>(points_per_subband);
    }
    return g;
}

/// K-factor of one sweep via the moment estimator over its subband
/// realizations.
inline double estimate_kf(const FrequencySweep& ctf, const SubbandConfig& cfg = {}) {
    return moment_kf_db(subband_realizations(ctf, cfg));
}

/// Multiplies the sweep by exp(+j 2 pi f delay), i.e. shifts the delay origin
/// so a path at `delay_ns` lands at zero delay.
inline FrequencySweep derotate(const FrequencySweep& sweep, double delay_ns) {
    FrequencySweep out = sweep;
    const double tau_s = delay_ns * 1.0e-9;
    for (std::size_t k = 0; k < out.gains.size(); ++k)
        out.gains[k] *= std::polar(1.0, 2.0 * std::numbers::pi * out.grid.frequency_hz(k) * tau_s);
    return out;
}

inline double peak_delay_ns(const Pdp& pdp) {
    if (pdp.powers.empty()) throw TooFewPoints("peak_delay_ns: empty PDP");
    const auto it = std::max_element(pdp.powers.begin(), pdp.powers.end());
    return pdp.delays_ns[static_cast<std::size_t>(it - pdp.powers.begin())];
}

struct GaussianFit {
    GlobalKfParams params;
    std::size_t n_used = 0;
    std::size_t n_excluded = 0;  // non-finite or above the sentinel threshold
};

/// Gaussian fit of KF samples in dB: mu = sample mean, sigma = unbiased
/// sample standard deviation. Non-finite samples and samples above
/// exclude_above_db (noise-free deterministic subchannels) are excluded and
/// counted separately.
inline GaussianFit fit_gaussian_db(const std::vector<double>& kf_samples_db,
                                   double exclude_above_db = 50.0) {
    std::vector<double> x;
    x.reserve(kf_samples_db.size());
    for (double v : kf_samples_db)
        if (std::isfinite(v) && v <= exclude_above_db) x.push_back(v);
    GaussianFit fit;
    fit.n_used = x.size();
    fit.n_excluded = kf_samples_db.size() - x.size();
    if (x.size() < 2) throw TooFewSamples("fit_gaussian_db: need at least 2 finite samples");
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    fit.params.mu_db = mu;
    fit.params.sigma_db = std::sqrt(ss / static_cast<double>(x.size() - 1));
    return fit;
}

/// Inter-cluster statistics pooled over drops. Inter-arrival samples are the
/// delay gaps between adjacent cluster centers; the rate is the inverse mean.
/// The power decay rate is the negated through-origin log-linear slope of
/// center power over excess delay, with each drop's first-cluster power
/// normalized to 1. Rate fields stay unset when no drop has two clusters.
struct InterClusterStats {
    double avg_num_clusters = 0.0;
    std::size_t n_drops = 0;
    std::size_t n_gap_samples = 0;
    std::optional<double> mean_cluster_arrival_time_ns;
    std::optional<double> cluster_arrival_rate_per_ns;
    std::optional<double> cluster_power_decay_per_ns;
};

inline InterClusterStats inter_cluster_stats(const std::vector<ClusteringResult>& results) {
    if (results.empty()) throw TooFewSamples("inter_cluster_stats: no drops");
    InterClusterStats st;
    st.n_drops = results.size();
    double count_sum = 0.0;
    double gap_sum = 0.0;
    std::size_t gaps = 0;
    double sxy = 0.0, sxx = 0.0;
    for (const ClusteringResult& r : results) {
        count_sum += static_cast<double>(r.clusters.size());
        if (r.clusters.size() < 2) continue;
        const double p1 = r.clusters.front().center().amplitude *
                          r.clusters.front().center().amplitude;
        const double t1 = r.clusters.front().center().delay_ns;
        for (std::size_t m = 1; m < r.clusters.size(); ++m) {
            const Mpc& prev = r.clusters[m - 1].center();
            const Mpc& cur = r.clusters[m].center();
            gap_sum += cur.delay_ns - prev.delay_ns;
            ++gaps;
            if (p1 > 0.0 && cur.amplitude > 0.0) {
                const double x = cur.delay_ns - t1;
                const double y = std::log(cur.amplitude * cur.amplitude / p1);
                sxy += x * y;
                sxx += x * x;
            }
        }
    }
    st.avg_num_clusters = count_sum / static_cast<double>(results.size());
    st.n_gap_samples = gaps;
    if (gaps > 0) {
        st.mean_cluster_arrival_time_ns = gap_sum / static_cast<double>(gaps);
        st.cluster_arrival_rate_per_ns = 1.0 / *st.mean_cluster_arrival_time_ns;
    }
    if (sxx > 0.0) st.cluster_power_decay_per_ns = -sxy / sxx;
    return st;
}

// ---------------------------------------------------------------- cursors

enum class CursorSide { pre, post };

/// Ray relative to its cluster center (rel_delay < 0 on the pre side).
struct RelRay {
    double rel_delay_ns = 0.0;
    double amplitude = 0.0;
};

struct CursorSplit {
    std::vector<RelRay> pre;
    Mpc center;
    std::vector<RelRay> post;
};

/// Splits a cluster around its central ray; relative delays are measured
/// against the center (0 at the center itself).
inline CursorSplit split_cursors(const Cluster& cluster) {
    CursorSplit s;
    s.center = cluster.center();
    for (std::size_t i = 0; i < cluster.rays.size(); ++i) {
        if (i == cluster.center_index) continue;
        RelRay r{cluster.rays[i].delay_ns - s.center.delay_ns, cluster.rays[i].amplitude};
        if (i < cluster.center_index)
            s.pre.push_back(r);
        else
            s.post.push_back(r);
    }
    return s;
}

struct CursorFit {
    double decay_time_ns = 0.0;       // gamma; +inf for a zero or wrong-sign slope
    double arrival_rate_per_ns = 0.0; // rays per ns over the observed span
    double anchor_amplitude = 0.0;    // fitted A(0)
    std::size_t n_rays = 0;
    double residual = 0.0;            // RMS of log-amplitude residuals
};

/// Log-linear least squares of ln(amplitude) over relative delay. The decay
/// time takes the side's sign convention (pre amplitudes grow toward the
/// center). The arrival rate is the homogeneous-Poisson ML estimate
/// n / span on the observed window from the center to the farthest ray.
inline CursorFit fit_cursor(const std::vector<RelRay>& rays, CursorSide side) {
    std::vector<RelRay> r;
    r.reserve(rays.size());
    for (const RelRay& x : rays)
        if (x.amplitude > 0.0) r.push_back(x);
    if (r.size() < 2) throw TooFewRays("fit_cursor: need at least 2 rays with positive amplitude");

    const auto n = static_cast<double>(r.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, span = 0.0;
    for (const RelRay& x : r) {
        const double y = std::log(x.amplitude);
        sx += x.rel_delay_ns;
        sy += y;
        sxx += x.rel_delay_ns * x.rel_delay_ns;
        sxy += x.rel_delay_ns * y;
        span = std::max(span, std::abs(x.rel_delay_ns));
    }
    const double denom = sxx - sx * sx / n;

    CursorFit fit;
    fit.n_rays = r.size();
    fit.arrival_rate_per_ns =
        span > 0.0 ? n / span : std::numeric_limits<double>::infinity();

    double slope = 0.0;
    double intercept = sy / n;
    if (denom > 0.0) {
        slope = (sxy - sx * sy / n) / denom;
        intercept = (sy - slope * sx) / n;
    }
    const double signed_slope = (side == CursorSide::post) ? -slope : slope;
    fit.decay_time_ns =
        signed_slope > 0.0 ? 1.0 / signed_slope : std::numeric_limits<double>::infinity();
    fit.anchor_amplitude = std::exp(intercept);

    double ss = 0.0;
    for (const RelRay& x : r) {
        const double e = std::log(x.amplitude) - (intercept + slope * x.rel_delay_ns);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

/// Power-weighted RMS spread of ray delays (second central moment with
/// |h|^2 weights).
inline double rms_delay_spread(const Cluster& cluster) {
    if (cluster.rays.empty()) throw TooFewPoints("rms_delay_spread: empty cluster");
    double p = 0.0, m1 = 0.0, m2 = 0.0;
    for (const Mpc& r : cluster.rays) {
        const double w = r.amplitude * r.amplitude;
        p += w;
        m1 += w * r.delay_ns;
        m2 += w * r.delay_ns * r.delay_ns;
    }
    if (p == 0.0) return 0.0;
    m1 /= p;
    m2 /= p;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

// ---------------------------------------------------------------- pipeline

struct EstimationConfig {
    DetectionConfig detection;
    ClusteringConfig clustering;
    SubbandConfig subband;
    unsigned zero_pad_factor = 4;   // detection-side delay interpolation
    double ray_window_db = 30.0;    // dynamic range assumed for the cursor observation window
    double kf_exclude_above_db = 50.0;
    // Clusters whose centers are closer than one intra-cluster footprint are a
    // silhouette artifact (delay-only K-means happily splits a wide cluster);
    // the pipeline merges them back before computing statistics. The same
    // footprint bounds the cursor rays attributed to cluster 1.
    double min_cluster_separation_ns = 46.0;
    // Rays this close to the center compete with it for the max-amplitude
    // designation, which censors their amplitudes; the envelope fit starts
    // beyond this exclusion zone.
    double cursor_fit_min_rel_ns = 3.0;
    // One trimming pass on the pooled envelope fits: points this many sigma
    // ABOVE the fitted line are mis-attributed rays (a displaced center or a
    // stray from a neighboring cluster), not Rayleigh upside, whose log upper
    // tail is negligible at this level.
    double cursor_fit_trim_sigma = 2.0;
};

/// fit_cursor with one upper-residual trimming pass.
inline CursorFit fit_cursor_trimmed(const std::vector<RelRay>& rays, CursorSide side,
                                    double trim_sigma) {
    const CursorFit first = fit_cursor(rays, side);
    if (!(trim_sigma > 0.0) || first.residual <= 0.0) return first;
    const double slope = (side == CursorSide::post ? -1.0 : 1.0) /
                         (std::isfinite(first.decay_time_ns) ? first.decay_time_ns
                                                             : std::numeric_limits<double>::max());
    const double a = std::log(first.anchor_amplitude);
    std::vector<RelRay> kept;
    kept.reserve(rays.size());
    for (const RelRay& r : rays) {
        if (r.amplitude <= 0.0) continue;
        const double resid = std::log(r.amplitude) - (a + slope * r.rel_delay_ns);
        if (resid <= trim_sigma * first.residual) kept.push_back(r);
    }
    if (kept.size() < 2 || kept.size() == rays.size()) return first;
    return fit_cursor(kept, side);
}

/// Merges adjacent clusters whose center gap is below min_separation_ns.
inline std::vector<Cluster> merge_close_clusters(std::vector<Cluster> clusters,
                                                 double min_separation_ns) {
    bool merged = true;
    while (merged && clusters.size() > 1) {
        merged = false;
        for (std::size_t m = 1; m < clusters.size(); ++m) {
            if (clusters[m].center().delay_ns - clusters[m - 1].center().delay_ns >=
                min_separation_ns)
                continue;
            std::vector<Mpc> rays = clusters[m - 1].rays;
            rays.insert(rays.end(), clusters[m].rays.begin(), clusters[m].rays.end());
            clusters[m - 1] = make_cluster(std::move(rays));
            clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(m));
            merged = true;
            break;
        }
    }
    return clusters;
}

/// Split/merge refinement around the resolvable footprint: a cluster wider
/// than min_separation_ns must span several true clusters (silhouette argmax
/// can prefer merging a close pair when a third cluster sits far away), so it
/// is re-split; afterwards clusters closer than the footprint are merged.
inline std::vector<Cluster> refine_clusters(std::vector<Cluster> clusters,
                                            double min_separation_ns,
                                            const ClusteringConfig& cfg = {}) {
    std::vector<Cluster> split;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        Cluster& c = clusters[i];
        const double width = c.rays.back().delay_ns - c.rays.front().delay_ns;
        if (width <= min_separation_ns || c.rays.size() < 2) {
            split.push_back(std::move(c));
            continue;
        }
        const KMeansResult km = kmeans_delay(c.rays, 2, cfg);
        std::vector<Mpc> lo, hi;
        for (std::size_t j = 0; j < c.rays.size(); ++j)
            (km.labels[j] == km.labels.front() ? lo : hi).push_back(c.rays[j]);
        if (lo.empty() || hi.empty()) {
            split.push_back(std::move(c));
            continue;
        }
        clusters.push_back(make_cluster(std::move(lo)));
        clusters.push_back(make_cluster(std::move(hi)));  // re-examined later in the loop
    }
    std::sort(split.begin(), split.end(), [](const Cluster& a, const Cluster& b) {
        return a.center().delay_ns < b.center().delay_ns;
    });
    return merge_close_clusters(std::move(split), min_separation_ns);
}

struct EstimationReport {
    ScenarioParams params;
    std::size_t n_drops = 0;
    std::size_t n_drops_used = 0;
    std::size_t n_drops_skipped = 0;
    std::size_t n_kf_samples = 0;
    std::size_t n_kf_excluded = 0;
    std::size_t n_gap_samples = 0;
    std::size_t n_pre_rays = 0;
    std::size_t n_post_rays = 0;
    std::size_t n_rms_samples = 0;
    InterClusterStats inter_stats;
    std::vector<double> kf_db_per_drop;
    std::vector<int> chosen_k_per_drop;
};

namespace detail {

struct PerDrop {
    double kf_db = std::numeric_limits<double>::quiet_NaN();
    MpcSet mpcs;
};

/// Measured sweeps run through the DSP chain (peak alignment for the KF path,
/// padded PDP and threshold detection for the MPC path). Synthesized drops
/// contribute their drawn ray set and realized LOS/scatter ratio, so the
/// statistical model itself is what gets re-estimated.
inline PerDrop reduce_drop(const Drop& drop, const EstimationConfig& cfg) {
    PerDrop out;
    if (const auto* syn = std::get_if<SynthesizedDrop>(&drop)) {
        out.kf_db = linear_to_db(realized_kf_linear(syn->ground_truth));
        out.mpcs = mpcs_from_ground_truth(syn->ground_truth);
        return out;
    }
    const auto& sweep = std::get<FrequencySweep>(drop);
    const ImpulseResponse cir = ctf_to_cir(sweep, cfg.zero_pad_factor);
    const Pdp pdp = compute_pdp(cir);
    out.kf_db = estimate_kf(derotate(sweep, peak_delay_ns(pdp)), cfg.subband);
    out.mpcs = detect_mpcs(pdp, cfg.detection, &cir);
    return out;
}

}  // namespace detail

/// Full estimation pipeline over a drop ensemble: per-drop KF and MPC
/// extraction, clustering, then global / inter-cluster / intra-cluster
/// statistics of cluster 1. Drops that fail detection are skipped and
/// counted. Cursor arrival rates use the observation window implied by the
/// fitted decay time and cfg.ray_window_db; decay times come from cursor rays
/// pooled across drops (amplitudes normalized per drop by the cluster
/// center).
inline EstimationReport estimate_scenario(const DropEnsemble& ensemble,
                                          const EstimationConfig& cfg = {}) {
    if (ensemble.drops.empty()) throw TooFewSamples("estimate_scenario: empty ensemble");

    EstimationReport rep;
    rep.n_drops = ensemble.drops.size();

    std::vector<double> kf_samples;
    std::vector<ClusteringResult> clusterings;
    std::vector<RelRay> pooled_pre, pooled_post;
    double pre_count_sum = 0.0, post_count_sum = 0.0;
    double rms_sum = 0.0, ray_count_sum = 0.0, center_delay_sum = 0.0;
    std::size_t first_cluster_drops = 0;

    for (const Drop& drop : ensemble.drops) {
        detail::PerDrop pd;
        try {
            pd = detail::reduce_drop(drop, cfg);
        } catch (const EmptyResult&) {
            ++rep.n_drops_skipped;
            continue;
        }
        ++rep.n_drops_used;
        kf_samples.push_back(pd.kf_db);
        rep.kf_db_per_drop.push_back(pd.kf_db);

        ClusteringResult cl = select_clusters(pd.mpcs, cfg.clustering);
        cl.clusters = refine_clusters(std::move(cl.clusters), cfg.min_cluster_separation_ns,
                                      cfg.clustering);
        cl.chosen_k = static_cast<int>(cl.clusters.size());
        rep.chosen_k_per_drop.push_back(cl.chosen_k);

        // cluster-1 intra statistics, limited to the plausible cluster
        // footprint around the center (rays farther out belong to an
        // unresolved later cluster)
        CursorSplit split = split_cursors(cl.clusters.front());
        std::vector<Mpc> footprint{split.center};
        std::vector<RelRay> pre, post;
        for (const RelRay& r : split.pre)
            if (-r.rel_delay_ns <= cfg.min_cluster_separation_ns) {
                pre.push_back(r);
                footprint.push_back({split.center.delay_ns + r.rel_delay_ns, r.amplitude, {}});
            }
        for (const RelRay& r : split.post)
            if (r.rel_delay_ns <= cfg.min_cluster_separation_ns) {
                post.push_back(r);
                footprint.push_back({split.center.delay_ns + r.rel_delay_ns, r.amplitude, {}});
            }

        ++first_cluster_drops;
        ray_count_sum += static_cast<double>(footprint.size());
        center_delay_sum += split.center.delay_ns;
        rms_sum += rms_delay_spread(make_cluster(std::move(footprint)));
        ++rep.n_rms_samples;

        pre_count_sum += static_cast<double>(pre.size());
        post_count_sum += static_cast<double>(post.size());
        const double center_amp = split.center.amplitude;
        if (center_amp > 0.0) {
            for (const RelRay& r : pre)
                if (-r.rel_delay_ns >= cfg.cursor_fit_min_rel_ns)
                    pooled_pre.push_back({r.rel_delay_ns, r.amplitude / center_amp});
            for (const RelRay& r : post)
                if (r.rel_delay_ns >= cfg.cursor_fit_min_rel_ns)
                    pooled_post.push_back({r.rel_delay_ns, r.amplitude / center_amp});
        }
        clusterings.push_back(std::move(cl));
    }
    if (rep.n_drops_used == 0) throw TooFewSamples("estimate_scenario: every drop was skipped");

    try {
        rep.params.scenario = parse_scenario(ensemble.scenario);
        rep.params.mode = parse_mode(ensemble.mode);
    } catch (const UnknownPreset&) {
        // unlabeled ensembles keep the defaults
    }

    const GaussianFit kf = fit_gaussian_db(kf_samples, cfg.kf_exclude_above_db);
    rep.params.kf = kf.params;
    rep.n_kf_samples = kf.n_used;
    rep.n_kf_excluded = kf.n_excluded;

    rep.inter_stats = inter_cluster_stats(clusterings);
    rep.n_gap_samples = rep.inter_stats.n_gap_samples;
    if (rep.inter_stats.mean_cluster_arrival_time_ns) {
        InterClusterParams inter;
        inter.avg_num_clusters = rep.inter_stats.avg_num_clusters;
        inter.mean_cluster_arrival_time_ns = *rep.inter_stats.mean_cluster_arrival_time_ns;
        inter.cluster_arrival_rate_per_ns = *rep.inter_stats.cluster_arrival_rate_per_ns;
        inter.cluster_power_decay_per_ns =
            rep.inter_stats.cluster_power_decay_per_ns.value_or(0.0);
        rep.params.inter = inter;
    }

    rep.n_pre_rays = pooled_pre.size();
    rep.n_post_rays = pooled_post.size();
    if (!pooled_pre.empty() && !pooled_post.empty() && first_cluster_drops > 0) {
        try {
            const CursorFit pre_fit =
                fit_cursor_trimmed(pooled_pre, CursorSide::pre, cfg.cursor_fit_trim_sigma);
            const CursorFit post_fit =
                fit_cursor_trimmed(pooled_post, CursorSide::post, cfg.cursor_fit_trim_sigma);
            const double drops_d = static_cast<double>(first_cluster_drops);

            IntraClusterParams intra;
            intra.avg_num_rays = ray_count_sum / drops_d;
            intra.rms_ds_ns = rms_sum / drops_d;
            intra.pre.power_decay_time_ns = pre_fit.decay_time_ns;
            intra.post.power_decay_time_ns = post_fit.decay_time_ns;
            intra.pre.avg_num_rays = pre_count_sum / drops_d;
            intra.post.avg_num_rays = post_count_sum / drops_d;

            const double w_pre = cursor_window_ns(pre_fit.decay_time_ns, cfg.ray_window_db);
            const double w_post = cursor_window_ns(post_fit.decay_time_ns, cfg.ray_window_db);
            intra.pre.arrival_rate_per_ns = std::isfinite(w_pre) && w_pre > 0.0
                                                ? intra.pre.avg_num_rays / w_pre
                                                : pre_fit.arrival_rate_per_ns;
            intra.post.arrival_rate_per_ns = std::isfinite(w_post) && w_post > 0.0
                                                 ? intra.post.avg_num_rays / w_post
                                                 : post_fit.arrival_rate_per_ns;
            rep.params.intra = intra;
        } catch (const TooFewRays&) {
            // not enough pooled cursor rays; leave the intra block unset
        }
    }
    rep.params.los_delay_ns =
        first_cluster_drops > 0 ? center_delay_sum / static_cast<double>(first_cluster_drops) : 0.0;
    return rep;
}

}  // namespace rischan

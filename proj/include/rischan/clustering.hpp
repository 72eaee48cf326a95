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
#include <map>
#include <optional>
#include <vector>

#include "rischan/types.hpp"

// Delay-domain clustering of detected MPCs: 1-D K-means (deterministic
// farthest-point seeding, Lloyd iterations) with silhouette-based selection
// of the cluster count. Feature space is delay only; amplitudes enter only
// when the cluster center is designated.

namespace rischan {

struct ClusteringConfig {
    int k_min = 1;
    int k_max = 4;
    int max_iterations = 100;
    std::uint64_t seed = 0;  // reserved; the pipeline is deterministic without it
    double sc_single_cluster_threshold = 0.5;
};

/// Assignment produced by one K-means run.
struct KMeansResult {
    std::vector<int> labels;       // one per input MPC
    std::vector<double> centroids; // mean delay per cluster, k entries
    double sse = 0.0;
    std::vector<double> sse_trace; // SSE after each Lloyd assignment step
    int iterations = 0;
};

struct ClusteringResult {
    std::vector<Cluster> clusters;  // ordered by center delay
    int chosen_k = 0;
    std::map<int, std::optional<double>> silhouette_by_k;  // k=1 maps to nullopt
};

namespace detail {

/// Exact optimal 1-D k-partition by dynamic programming over contiguous
/// segments in sorted order (the optimal 1-D K-means partition is contiguous).
/// Returns sorted-order segment boundaries: k+1 entries, [b[c], b[c+1]) per
/// cluster.
inline std::vector<std::size_t> optimal_1d_partition(const std::vector<double>& sorted, int k) {
    const std::size_t n = sorted.size();
    std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s1[i + 1] = s1[i] + sorted[i];
        s2[i + 1] = s2[i] + sorted[i] * sorted[i];
    }
    auto seg_cost = [&](std::size_t i, std::size_t j) {  // [i, j)
        const double cnt = static_cast<double>(j - i);
        const double sum = s1[j] - s1[i];
        return (s2[j] - s2[i]) - sum * sum / cnt;
    };
    const auto uk = static_cast<std::size_t>(k);
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(uk + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> from(uk + 1, std::vector<std::size_t>(n + 1, 0));
    cost[0][0] = 0.0;
    for (std::size_t c = 1; c <= uk; ++c)
        for (std::size_t j = c; j <= n; ++j)
            for (std::size_t i = c - 1; i < j; ++i) {
                const double v = cost[c - 1][i] + seg_cost(i, j);
                if (v < cost[c][j]) {
                    cost[c][j] = v;
                    from[c][j] = i;
                }
            }
    std::vector<std::size_t> bounds(uk + 1);
    bounds[uk] = n;
    for (std::size_t c = uk; c > 0; --c) bounds[c - 1] = from[c][bounds[c]];
    return bounds;
}

}  // namespace detail

/// 1-D K-means on MPC delays. Seeding is deterministic: the first center is
/// the earliest-delay MPC; each further center is the point farthest from its
/// nearest chosen center (ties toward the smaller delay). Lloyd iterations run
/// until the assignment reaches a fixpoint or max_iterations; an emptied
/// cluster is reseeded at the point farthest from its assigned centroid.
/// Lloyd can stall in a local optimum, so the result is polished against the
/// exact contiguous-partition optimum (which is itself a Lloyd fixpoint); the
/// returned SSE is the global 1-D minimum.
inline KMeansResult kmeans_delay(const MpcSet& mpcs, int k, const ClusteringConfig& cfg = {}) {
    const std::size_t n = mpcs.size();
    if (k < 1) throw Error("kmeans_delay: k must be >= 1");
    if (n < static_cast<std::size_t>(k))
        throw TooFewPoints("kmeans_delay: fewer MPCs than clusters requested");

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = mpcs[i].delay_ns;

    // farthest-point seeding from the earliest-delay MPC
    std::vector<double> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(*std::min_element(d.begin(), d.end()));
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double best_dist = -1.0;
        double best_delay = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::abs(d[i] - centroids[0]);
            for (std::size_t c = 1; c < centroids.size(); ++c)
                nearest = std::min(nearest, std::abs(d[i] - centroids[c]));
            if (nearest > best_dist ||
                (nearest == best_dist && d[i] < best_delay)) {
                best_dist = nearest;
                best_delay = d[i];
            }
        }
        centroids.push_back(best_delay);
    }

    KMeansResult res;
    res.labels.assign(n, 0);

    auto assign = [&]() {
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_dist = std::abs(d[i] - centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double dist = std::abs(d[i] - centroids[static_cast<std::size_t>(c)]);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = c;
                }
            }
            res.labels[i] = best;
            sse += best_dist * best_dist;
        }
        return sse;
    };

    assign();
    for (int it = 0; it < cfg.max_iterations; ++it) {
        // means
        std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
        std::vector<std::size_t> cnt(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[static_cast<std::size_t>(res.labels[i])] += d[i];
            ++cnt[static_cast<std::size_t>(res.labels[i])];
        }
        for (int c = 0; c < k; ++c) {
            const auto uc = static_cast<std::size_t>(c);
            if (cnt[uc] > 0) {
                centroids[uc] = sum[uc] / static_cast<double>(cnt[uc]);
            } else {
                // reseed at the point farthest from its own centroid
                double worst = -1.0;
                std::size_t pick = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dist =
                        std::abs(d[i] - centroids[static_cast<std::size_t>(res.labels[i])]);
                    if (dist > worst) {
                        worst = dist;
                        pick = i;
                    }
                }
                centroids[uc] = d[pick];
            }
        }
        const std::vector<int> prev = res.labels;
        res.sse = assign();
        res.sse_trace.push_back(res.sse);
        res.iterations = it + 1;
        if (res.labels == prev) break;
    }

    // exact-optimum polish
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = d[order[i]];
    const std::vector<std::size_t> bounds = detail::optimal_1d_partition(sorted, k);
    std::vector<int> opt_labels(n, 0);
    std::vector<double> opt_centroids(static_cast<std::size_t>(k), 0.0);
    double opt_sse = 0.0;
    for (int c = 0; c < k; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        const std::size_t lo = bounds[uc], hi = bounds[uc + 1];
        double mean = 0.0;
        for (std::size_t i = lo; i < hi; ++i) mean += sorted[i];
        if (hi > lo) mean /= static_cast<double>(hi - lo);
        opt_centroids[uc] = mean;
        for (std::size_t i = lo; i < hi; ++i) {
            opt_labels[order[i]] = c;
            opt_sse += (sorted[i] - mean) * (sorted[i] - mean);
        }
    }
    if (opt_sse < res.sse) {
        res.labels = std::move(opt_labels);
        res.sse = opt_sse;
        res.sse_trace.push_back(opt_sse);
        centroids = std::move(opt_centroids);
    }
    res.centroids = centroids;
    return res;
}

/// Mean silhouette over all points with absolute delay distance. Undefined
/// (nullopt) for a single cluster; members of singleton clusters contribute 0.
inline std::optional<double> silhouette(const MpcSet& mpcs, const std::vector<int>& labels) {
    const std::size_t n = mpcs.size();
    if (labels.size() != n) throw Error("silhouette: label count differs from MPC count");
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    if (k <= 1) return std::nullopt;

    std::vector<std::size_t> size(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++size[static_cast<std::size_t>(l)];

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto li = static_cast<std::size_t>(labels[i]);
        if (size[li] <= 1) continue;  // singleton convention: s = 0
        std::vector<double> mean_dist(static_cast<std::size_t>(k), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_dist[static_cast<std::size_t>(labels[j])] +=
                std::abs(mpcs[i].delay_ns - mpcs[j].delay_ns);
        }
        const double a = mean_dist[li] / static_cast<double>(size[li] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (c == li || size[c] == 0) continue;
            b = std::min(b, mean_dist[c] / static_cast<double>(size[c]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

/// Selection rule over the per-k silhouette scores: argmax of the defined
/// scores (ties toward smaller k); if the best score is below the threshold
/// or no score is defined, fall back to a single cluster.
inline int choose_k(const std::map<int, std::optional<double>>& scores, double threshold) {
    int best_k = 1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const auto& [k, s] : scores) {
        if (!s) continue;
        if (*s > best_score) {
            best_score = *s;
            best_k = k;
        }
    }
    if (best_score < threshold) return 1;
    return best_k;
}

/// Runs kmeans_delay for each candidate k, evaluates silhouettes, picks k via
/// choose_k, and materializes clusters (ordered by center delay, each center
/// the max-amplitude ray).
inline ClusteringResult select_clusters(const MpcSet& mpcs, const ClusteringConfig& cfg = {}) {
    if (mpcs.empty()) throw TooFewPoints("select_clusters: empty MPC set");
    const int n = static_cast<int>(mpcs.size());

    ClusteringResult res;
    if (cfg.k_min <= 1) res.silhouette_by_k[1] = std::nullopt;

    std::map<int, KMeansResult> runs;
    const int k_lo = std::max(2, cfg.k_min);
    const int k_hi = std::min(cfg.k_max, n);
    for (int k = k_lo; k <= k_hi; ++k) {
        runs[k] = kmeans_delay(mpcs, k, cfg);
        res.silhouette_by_k[k] = silhouette(mpcs, runs[k].labels);
    }

    int k = (n < 2) ? 1 : choose_k(res.silhouette_by_k, cfg.sc_single_cluster_threshold);
    res.chosen_k = k;

    std::vector<int> labels;
    if (k == 1) {
        labels.assign(mpcs.size(), 0);
    } else {
        labels = runs.at(k).labels;
    }

    std::vector<std::vector<Mpc>> groups(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < mpcs.size(); ++i)
        groups[static_cast<std::size_t>(labels[i])].push_back(mpcs[i]);
    for (auto& g : groups)
        if (!g.empty()) res.clusters.push_back(make_cluster(std::move(g)));
    std::sort(res.clusters.begin(), res.clusters.end(), [](const Cluster& a, const Cluster& b) {
        return a.center().delay_ns < b.center().delay_ns;
    });
    res.chosen_k = static_cast<int>(res.clusters.size());
    return res;
}

}  // namespace rischan

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

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "rischan/estimation.hpp"
#include "rischan/presets.hpp"
#include "rischan/rng.hpp"

using namespace rischan;

TEST_CASE("constant sweep yields the +inf K sentinel") {
    FrequencySweep s;
    s.grid = default_grid();
    s.gains.assign(s.grid.n_points, cplx{0.7, -0.2});
    CHECK(std::isinf(estimate_kf(s)));
    CHECK(estimate_kf(s) > 0.0);
}

TEST_CASE("Rayleigh realizations drive the K estimate to zero") {
    // for Rayleigh, E|g|^4 = 2 (E|g|^2)^2 so gamma -> 1 and K -> 0 linear
    std::mt19937_64 rng = substream_rng(1, 0);
    std::vector<cplx> g(100000);
    for (auto& x : g)
        x = cplx{draw_normal(rng, 0, 1), draw_normal(rng, 0, 1)} * std::sqrt(0.5);
    CHECK(std::abs(moment_kf_linear(g)) < 0.05);
}

TEST_CASE("moment estimator recovers a 10 dB Rician K from many realizations") {
    std::mt19937_64 rng = substream_rng(1, 1);
    const double k = db_to_linear(10.0);
    const double los = std::sqrt(k / (k + 1.0));
    const double sigma = std::sqrt(0.5 / (k + 1.0));
    std::vector<cplx> g(100000);
    for (auto& x : g)
        x = cplx{los + sigma * draw_normal(rng, 0, 1), sigma * draw_normal(rng, 0, 1)};
    CHECK(moment_kf_db(g) == Catch::Approx(10.0).margin(0.3));
}

TEST_CASE("estimate_kf is invariant to complex scaling of the sweep") {
    std::mt19937_64 rng = substream_rng(1, 2);
    const FrequencySweep s = fixtures::rician_subband_sweep(8.0, rng);
    FrequencySweep scaled = s;
    for (auto& g : scaled.gains) g *= cplx{3.0, -4.0};
    CHECK(estimate_kf(scaled) == Catch::Approx(estimate_kf(s)).epsilon(1e-12));
}

TEST_CASE("estimate_kf rejects grids that do not support the partition") {
    FrequencySweep s;
    s.grid = FrequencyGrid{2.5e9, 2.59e9, 91};  // only 9 subbands of 10 points fit
    s.gains.assign(91, cplx{1.0, 0.0});
    CHECK_THROWS_AS(estimate_kf(s, SubbandConfig{19, 10e6}), GridMismatch);
    CHECK_NOTHROW(estimate_kf(s, SubbandConfig{9, 10e6}));
}

TEST_CASE("subband realizations are the 10-point means, last point dropped") {
    FrequencySweep s;
    s.grid = default_grid();
    s.gains.resize(191);
    for (std::size_t k = 0; k < 191; ++k)
        s.gains[k] = cplx{static_cast<double>(k / 10), 0.0};
    s.gains[190] = cplx{1e9, 0.0};  // dropped by the partition
    const auto g = subband_realizations(s);
    REQUIRE(g.size() == 19);
    for (std::size_t i = 0; i < 19; ++i)
        CHECK(g[i] == cplx{static_cast<double>(i), 0.0});
}

TEST_CASE("fit_gaussian_db of identical samples has zero sigma") {
    const auto fit = fit_gaussian_db(std::vector<double>(20, 15.7));
    CHECK(fit.params.mu_db == Catch::Approx(15.7));
    CHECK(fit.params.sigma_db == 0.0);
    CHECK(fit.n_used == 20);
}

TEST_CASE("fit_gaussian_db recovers a known normal distribution") {
    std::mt19937_64 rng = substream_rng(1, 3);
    std::vector<double> x(10000);
    for (double& v : x) v = draw_normal(rng, 15.7, 4.6);
    const auto fit = fit_gaussian_db(x);
    // standard errors: 4.6/100 for mu, 4.6/sqrt(2 n) for sigma
    CHECK(fit.params.mu_db == Catch::Approx(15.7).margin(0.15));
    CHECK(fit.params.sigma_db == Catch::Approx(4.6).margin(0.15));
}

TEST_CASE("fit_gaussian_db excludes sentinels and requires two samples") {
    const double inf = std::numeric_limits<double>::infinity();
    const auto fit = fit_gaussian_db({10.0, 12.0, inf, 80.0, -inf}, 50.0);
    CHECK(fit.n_used == 2);
    CHECK(fit.n_excluded == 3);
    CHECK(fit.params.mu_db == Catch::Approx(11.0));

    CHECK_THROWS_AS(fit_gaussian_db({1.0}), TooFewSamples);
    CHECK_THROWS_AS(fit_gaussian_db({1.0, inf}), TooFewSamples);
}

namespace {

ClusteringResult clustering_of(const std::vector<std::pair<double, double>>& centers_amp) {
    // builds a ClusteringResult whose clusters are singleton centers
    ClusteringResult r;
    for (const auto& [delay, amp] : centers_amp)
        r.clusters.push_back(make_cluster({Mpc{delay, amp, {}}}));
    std::sort(r.clusters.begin(), r.clusters.end(), [](const Cluster& a, const Cluster& b) {
        return a.center().delay_ns < b.center().delay_ns;
    });
    r.chosen_k = static_cast<int>(r.clusters.size());
    return r;
}

}  // namespace

TEST_CASE("inter_cluster_stats on constant 126.5 ns gaps") {
    std::vector<ClusteringResult> results;
    for (int d = 0; d < 40; ++d)
        results.push_back(clustering_of({{30.0, 1.0}, {156.5, 0.5}}));
    const InterClusterStats st = inter_cluster_stats(results);
    CHECK(st.avg_num_clusters == 2.0);
    REQUIRE(st.mean_cluster_arrival_time_ns.has_value());
    CHECK(*st.mean_cluster_arrival_time_ns == Catch::Approx(126.5));
    CHECK(*st.cluster_arrival_rate_per_ns == Catch::Approx(1.0 / 126.5));
}

TEST_CASE("inter_cluster_stats with single-cluster drops reports counts only") {
    std::vector<ClusteringResult> results(10, clustering_of({{30.0, 1.0}}));
    const InterClusterStats st = inter_cluster_stats(results);
    CHECK(st.avg_num_clusters == 1.0);
    CHECK_FALSE(st.mean_cluster_arrival_time_ns.has_value());
    CHECK_FALSE(st.cluster_arrival_rate_per_ns.has_value());
    CHECK_FALSE(st.cluster_power_decay_per_ns.has_value());
}

TEST_CASE("noiseless exponential center powers re-fit the decay rate exactly") {
    std::vector<ClusteringResult> results;
    const double rate = 0.03;
    for (int d = 0; d < 5; ++d) {
        const double t1 = 20.0 + d;
        std::vector<std::pair<double, double>> centers{{t1, 1.0}};
        for (double gap : {110.0, 240.0})
            centers.push_back({t1 + gap, std::sqrt(std::exp(-rate * gap))});
        results.push_back(clustering_of(centers));
    }
    const InterClusterStats st = inter_cluster_stats(results);
    REQUIRE(st.cluster_power_decay_per_ns.has_value());
    CHECK(*st.cluster_power_decay_per_ns == Catch::Approx(rate).epsilon(1e-9));
}

TEST_CASE("rate always equals the inverse mean over the same samples") {
    std::mt19937_64 rng = substream_rng(1, 4);
    std::vector<ClusteringResult> results;
    for (int d = 0; d < 30; ++d) {
        std::vector<std::pair<double, double>> centers{{30.0, 1.0}};
        double t = 30.0;
        const int extra = static_cast<int>(uniform01(rng) * 3);
        for (int m = 0; m < extra; ++m) {
            t += uniform(rng, 50.0, 250.0);
            centers.push_back({t, uniform(rng, 0.1, 1.0)});
        }
        results.push_back(clustering_of(centers));
    }
    const InterClusterStats st = inter_cluster_stats(results);
    if (st.mean_cluster_arrival_time_ns)
        CHECK(*st.cluster_arrival_rate_per_ns ==
              Catch::Approx(1.0 / *st.mean_cluster_arrival_time_ns).epsilon(1e-12));
}

TEST_CASE("split_cursors of a single-ray cluster is empty on both sides") {
    const CursorSplit s = split_cursors(make_cluster({Mpc{10.0, 1.0, {}}}));
    CHECK(s.pre.empty());
    CHECK(s.post.empty());
    CHECK(s.center.delay_ns == 10.0);
}

TEST_CASE("split_cursors separates 16 pre and 30 post rays") {
    std::vector<Mpc> rays;
    for (int i = 1; i <= 16; ++i) rays.push_back({100.0 - 2.0 * i, 0.1, {}});
    rays.push_back({100.0, 5.0, {}});  // center
    for (int i = 1; i <= 30; ++i) rays.push_back({100.0 + 1.5 * i, 0.1, {}});
    const CursorSplit s = split_cursors(make_cluster(std::move(rays)));
    CHECK(s.pre.size() == 16);
    CHECK(s.post.size() == 30);
    for (const RelRay& r : s.pre) CHECK(r.rel_delay_ns < 0.0);
    for (const RelRay& r : s.post) CHECK(r.rel_delay_ns > 0.0);
}

TEST_CASE("split_cursors of a symmetric cluster is balanced") {
    std::vector<Mpc> rays{{-6, 0.3, {}}, {-4, 0.5, {}}, {-2, 0.8, {}}, {0, 2.0, {}},
                          {2, 0.8, {}},  {4, 0.5, {}},  {6, 0.3, {}}};
    const CursorSplit s = split_cursors(make_cluster(std::move(rays)));
    CHECK(s.pre.size() == s.post.size());
}

TEST_CASE("fit_cursor recovers a noiseless post-cursor envelope exactly") {
    const double gamma = 6.31, a0 = 0.8;
    std::vector<RelRay> rays;
    for (int i = 1; i <= 10; ++i) {
        const double tau = 5.0 * i;
        rays.push_back({tau, a0 * std::exp(-tau / gamma)});
    }
    const CursorFit fit = fit_cursor(rays, CursorSide::post);
    CHECK(fit.decay_time_ns == Catch::Approx(gamma).epsilon(1e-9));
    CHECK(fit.anchor_amplitude == Catch::Approx(a0).epsilon(1e-9));
    CHECK(fit.n_rays == 10);
    CHECK(fit.residual == Catch::Approx(0.0).margin(1e-9));
    CHECK(fit.arrival_rate_per_ns == Catch::Approx(10.0 / 50.0));
}

TEST_CASE("fit_cursor recovers a noiseless pre-cursor envelope exactly") {
    const double gamma = 5.62, a0 = 1.2;
    std::vector<RelRay> rays;
    for (int i = 1; i <= 8; ++i) {
        const double tau = -2.5 * i;
        rays.push_back({tau, a0 * std::exp(tau / gamma)});
    }
    const CursorFit fit = fit_cursor(rays, CursorSide::pre);
    CHECK(fit.decay_time_ns == Catch::Approx(gamma).epsilon(1e-9));
    CHECK(fit.anchor_amplitude == Catch::Approx(a0).epsilon(1e-9));
}

TEST_CASE("fit_cursor flags a zero slope with the +inf sentinel") {
    const CursorFit fit = fit_cursor({{5.0, 0.5}, {10.0, 0.5}}, CursorSide::post);
    CHECK(std::isinf(fit.decay_time_ns));
    CHECK(fit.decay_time_ns > 0.0);
}

TEST_CASE("fit_cursor needs two rays with positive amplitude") {
    CHECK_THROWS_AS(fit_cursor({{5.0, 0.5}}, CursorSide::post), TooFewRays);
    CHECK_THROWS_AS(fit_cursor({{5.0, 0.5}, {10.0, 0.0}}, CursorSide::post), TooFewRays);
}

TEST_CASE("Poisson arrival rate estimate lands within 3% on a long window") {
    std::mt19937_64 rng = substream_rng(1, 5);
    const double lambda = 0.34;
    std::vector<RelRay> rays;
    double t = 0.0;
    for (int i = 0; i < 10000; ++i) {
        t += draw_exponential(rng, 1.0 / lambda);
        rays.push_back({t, std::exp(-0.001 * t) + 0.5});
    }
    const CursorFit fit = fit_cursor(rays, CursorSide::post);
    CHECK(fit.arrival_rate_per_ns == Catch::Approx(lambda).epsilon(0.03));
}

TEST_CASE("rms delay spread basics") {
    CHECK(rms_delay_spread(make_cluster({Mpc{7.0, 1.0, {}}})) == 0.0);
    // two equal-power rays at 0 and 10 ns: sqrt(50 - 25) = 5
    const Cluster two = make_cluster({Mpc{0.0, 1.0, {}}, Mpc{10.0, 1.0, {}}});
    CHECK(rms_delay_spread(two) == Catch::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("rms delay spread invariances") {
    std::mt19937_64 rng = substream_rng(1, 6);
    std::vector<Mpc> rays;
    for (int i = 0; i < 12; ++i) rays.push_back({uniform(rng, 0.0, 40.0), uniform(rng, 0.1, 2.0), {}});
    const Cluster base = make_cluster(rays);
    const double ref = rms_delay_spread(base);

    auto transformed = [&](double shift, double dilate, double amp_scale) {
        std::vector<Mpc> t;
        for (const Mpc& r : rays) t.push_back({r.delay_ns * dilate + shift, r.amplitude * amp_scale, {}});
        return rms_delay_spread(make_cluster(std::move(t)));
    };
    CHECK(transformed(123.0, 1.0, 1.0) == Catch::Approx(ref).epsilon(1e-12));
    CHECK(transformed(0.0, 3.5, 1.0) == Catch::Approx(3.5 * ref).epsilon(1e-12));
    CHECK(transformed(0.0, 1.0, 7.0) == Catch::Approx(ref).epsilon(1e-12));
}

TEST_CASE("estimate_scenario rejects an empty ensemble") {
    CHECK_THROWS_AS(estimate_scenario(DropEnsemble{}), TooFewSamples);
}

TEST_CASE("estimate_scenario on identical drops gives zero-sigma exact estimates") {
    const ScenarioParams preset = load_preset(Scenario::outdoor, Mode::irwr);
    SynthesisConfig cfg;
    cfg.seed = 5;
    cfg.n_drops = 1;
    const DropEnsemble one = synthesize_ensemble(preset, cfg);
    DropEnsemble many;
    many.scenario = one.scenario;
    many.mode = one.mode;
    for (int i = 0; i < 8; ++i) many.drops.push_back(one.drops.front());

    const EstimationReport rep = estimate_scenario(many);
    CHECK(rep.params.kf.sigma_db == 0.0);
    const auto& gt = std::get<SynthesizedDrop>(one.drops.front()).ground_truth;
    CHECK(rep.params.kf.mu_db == Catch::Approx(gt.k_db).margin(1e-9));
    CHECK(rep.n_drops_used == 8);
}

TEST_CASE("estimate_scenario runs the DSP chain for measured sweeps") {
    // a sweep with one strong path and one weaker 80 ns later
    const FrequencyGrid grid = default_grid();
    FrequencySweep s = fixtures::single_path_sweep(grid, 120.0);
    const FrequencySweep echo = fixtures::single_path_sweep(grid, 200.0);
    for (std::size_t k = 0; k < s.gains.size(); ++k) s.gains[k] += 0.2 * echo.gains[k];
    s.label = {"outdoor", "IRWR", "p01"};

    DropEnsemble ens;
    ens.scenario = "outdoor";
    ens.mode = "IRWR";
    for (int i = 0; i < 3; ++i) ens.drops.emplace_back(s);

    const EstimationReport rep = estimate_scenario(ens);
    CHECK(rep.n_drops_used == 3);
    CHECK(rep.params.scenario == Scenario::outdoor);
    // deterministic two-path channel: very high K against the weak echo
    CHECK(rep.n_kf_samples + rep.n_kf_excluded == 3);
    REQUIRE(rep.params.inter.has_value());
    CHECK(rep.params.inter->avg_num_clusters == Catch::Approx(2.0));
    REQUIRE(rep.params.inter->mean_cluster_arrival_time_ns > 70.0);
    CHECK(rep.params.inter->mean_cluster_arrival_time_ns < 90.0);
}

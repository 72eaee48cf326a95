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

#include "rischan/presets.hpp"
#include "rischan/rng.hpp"
#include "rischan/types.hpp"

using namespace rischan;

TEST_CASE("default grid matches the sweep layout") {
    const FrequencyGrid g = default_grid();
    CHECK(g.n_points == 191);
    CHECK(g.spacing_hz() == Catch::Approx(1.0e6));
    CHECK(g.span_hz() == Catch::Approx(190.0e6));
    CHECK(g.unambiguous_span_ns() == Catch::Approx(1000.0));
    CHECK(g.valid());
}

TEST_CASE("validate accepts the outdoor IRWR preset") {
    const ScenarioParams p = load_preset(Scenario::outdoor, Mode::irwr);
    CHECK(validate(p).empty());
}

TEST_CASE("validate flags a negative sigma") {
    ScenarioParams p = load_preset(Scenario::outdoor, Mode::irwr);
    p.kf.sigma_db = -1.0;
    const auto v = validate(p);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().find("sigma_db") != std::string::npos);
}

TEST_CASE("validate flags a rate inconsistent with the mean arrival time") {
    // 1/126.5 = 0.0079, far from 0.02
    ScenarioParams p = load_preset(Scenario::outdoor, Mode::irwr);
    p.inter->cluster_arrival_rate_per_ns = 0.02;
    const auto v = validate(p);
    REQUIRE(v.size() == 1);
    CHECK(v.front().find("within 10%") != std::string::npos);
}

TEST_CASE("every IRWR preset satisfies rate ~ 1/mean within 10%") {
    for (Scenario s :
         {Scenario::outdoor, Scenario::indoor, Scenario::o2i_left, Scenario::o2i_right}) {
        const ScenarioParams p = load_preset(s, Mode::irwr);
        REQUIRE(p.inter.has_value());
        const double rate = p.inter->cluster_arrival_rate_per_ns;
        const double inv = 1.0 / p.inter->mean_cluster_arrival_time_ns;
        CHECK(std::abs(rate - inv) / rate <= 0.10);
        CHECK(validate(p).empty());
    }
}

TEST_CASE("non-IRWR presets carry no cluster blocks") {
    for (Scenario s :
         {Scenario::outdoor, Scenario::indoor, Scenario::o2i_left, Scenario::o2i_right})
        for (Mode m : {Mode::srwr, Mode::wr}) {
            const ScenarioParams p = load_preset(s, m);
            CHECK_FALSE(p.inter.has_value());
            CHECK_FALSE(p.intra.has_value());
            CHECK(validate(p).empty());
        }
}

TEST_CASE("cluster center is the max-amplitude ray, ties to the earliest") {
    std::vector<Mpc> rays{{30.0, 0.5, {}}, {10.0, 2.0, {}}, {20.0, 2.0, {}}, {40.0, 1.0, {}}};
    const Cluster c = make_cluster(rays);
    CHECK(c.center().delay_ns == 10.0);  // amplitude tie at 2.0, earliest wins
    CHECK(c.center().amplitude == 2.0);
    for (std::size_t i = 1; i < c.rays.size(); ++i)
        CHECK(c.rays[i - 1].delay_ns <= c.rays[i].delay_ns);
}

TEST_CASE("re-sorting rays preserves the designated center identity") {
    std::mt19937_64 rng = substream_rng(17, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Mpc> rays;
        const int n = 2 + static_cast<int>(uniform01(rng) * 10);
        for (int i = 0; i < n; ++i)
            rays.push_back({uniform(rng, 0.0, 100.0), uniform(rng, 0.1, 5.0), {}});
        const Cluster a = make_cluster(rays);
        std::shuffle(rays.begin(), rays.end(), rng);
        const Cluster b = make_cluster(rays);
        CHECK(a.center().delay_ns == b.center().delay_ns);
        CHECK(a.center().amplitude == b.center().amplitude);
    }
}

TEST_CASE("preset registry has 12 entries and the documented KF values") {
    const auto all = list_presets();
    REQUIRE(all.size() == 12);

    const ScenarioParams o2i_r = load_preset(Scenario::o2i_right, Mode::irwr);
    CHECK(o2i_r.kf.mu_db == 16.8);
    CHECK(o2i_r.kf.sigma_db == 2.4);

    const ScenarioParams indoor_wr = load_preset(Scenario::indoor, Mode::wr);
    CHECK(indoor_wr.kf.mu_db == 2.0);
    CHECK(indoor_wr.kf.sigma_db == 3.5);
    CHECK_FALSE(indoor_wr.inter.has_value());

    const ScenarioParams out_srwr = load_preset(Scenario::outdoor, Mode::srwr);
    CHECK(out_srwr.kf.mu_db == 14.4);
    CHECK(out_srwr.kf.sigma_db == 3.9);

    // the two O2I aisles share one cluster block
    const ScenarioParams l = load_preset(Scenario::o2i_left, Mode::irwr);
    const ScenarioParams r = load_preset(Scenario::o2i_right, Mode::irwr);
    CHECK(l.inter->mean_cluster_arrival_time_ns == r.inter->mean_cluster_arrival_time_ns);
    CHECK(l.intra->rms_ds_ns == r.intra->rms_ds_ns);

    CHECK_THROWS_AS(load_preset("forest", "IRWR"), UnknownPreset);
    CHECK_THROWS_AS(load_preset("outdoor", "XR"), UnknownPreset);
}

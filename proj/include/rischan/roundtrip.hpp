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
#include <limits>
#include <string>
#include <vector>

#include "rischan/estimation.hpp"
#include "rischan/synthesis.hpp"
#include "rischan/types.hpp"

// Round-trip validation: synthesize an ensemble from a parameter bundle,
// re-estimate, and compare every re-estimated quantity against the bundle
// under per-quantity tolerances.

namespace rischan {

struct RoundtripTolerances {
    double kf_mu_abs_db = 0.5;
    double kf_sigma_abs_db = 0.5;
    double cluster_count_abs = 0.2;
    double arrival_time_rel = 0.10;
    double decay_time_rel = 0.10;
    double arrival_rate_rel = 0.10;
    double rms_ds_rel = 0.15;
};

struct RoundtripCheck {
    std::string name;
    double value = std::numeric_limits<double>::quiet_NaN();
    double target = 0.0;
    double tolerance = 0.0;
    bool relative = false;
    bool pass = false;
};

struct RoundtripResult {
    ScenarioParams reference;
    EstimationReport estimate;
    std::vector<RoundtripCheck> checks;
    bool all_pass = false;
};

namespace detail {

inline RoundtripCheck make_check(std::string name, double value, double target, double tol,
                                 bool relative) {
    RoundtripCheck c{std::move(name), value, target, tol, relative, false};
    const double bound = relative ? tol * std::abs(target) : tol;
    c.pass = std::isfinite(value) && std::abs(value - target) <= bound;
    return c;
}

}  // namespace detail

inline RoundtripResult run_roundtrip(const ScenarioParams& preset, const SynthesisConfig& syn_cfg,
                                     const EstimationConfig& est_cfg = {},
                                     const RoundtripTolerances& tol = {},
                                     unsigned n_threads = 1) {
    if (!preset.inter || !preset.intra)
        throw MissingClusterModel("run_roundtrip: preset carries no cluster model");

    RoundtripResult res;
    res.reference = preset;
    const DropEnsemble ens = synthesize_ensemble(preset, syn_cfg, n_threads);
    res.estimate = estimate_scenario(ens, est_cfg);

    const ScenarioParams& est = res.estimate.params;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    res.checks.push_back(detail::make_check("kf_mu_db", est.kf.mu_db, preset.kf.mu_db,
                                            tol.kf_mu_abs_db, false));
    res.checks.push_back(detail::make_check("kf_sigma_db", est.kf.sigma_db, preset.kf.sigma_db,
                                            tol.kf_sigma_abs_db, false));
    res.checks.push_back(detail::make_check(
        "avg_num_clusters", est.inter ? est.inter->avg_num_clusters : nan,
        preset.inter->avg_num_clusters, tol.cluster_count_abs, false));
    res.checks.push_back(detail::make_check(
        "mean_cluster_arrival_time_ns",
        est.inter ? est.inter->mean_cluster_arrival_time_ns : nan,
        preset.inter->mean_cluster_arrival_time_ns, tol.arrival_time_rel, true));
    res.checks.push_back(detail::make_check(
        "pre_power_decay_time_ns", est.intra ? est.intra->pre.power_decay_time_ns : nan,
        preset.intra->pre.power_decay_time_ns, tol.decay_time_rel, true));
    res.checks.push_back(detail::make_check(
        "post_power_decay_time_ns", est.intra ? est.intra->post.power_decay_time_ns : nan,
        preset.intra->post.power_decay_time_ns, tol.decay_time_rel, true));
    res.checks.push_back(detail::make_check(
        "pre_arrival_rate_per_ns", est.intra ? est.intra->pre.arrival_rate_per_ns : nan,
        preset.intra->pre.arrival_rate_per_ns, tol.arrival_rate_rel, true));
    res.checks.push_back(detail::make_check(
        "post_arrival_rate_per_ns", est.intra ? est.intra->post.arrival_rate_per_ns : nan,
        preset.intra->post.arrival_rate_per_ns, tol.arrival_rate_rel, true));
    res.checks.push_back(detail::make_check("rms_ds_ns", est.intra ? est.intra->rms_ds_ns : nan,
                                            preset.intra->rms_ds_ns, tol.rms_ds_rel, true));

    res.all_pass = true;
    for (const RoundtripCheck& c : res.checks) res.all_pass = res.all_pass && c.pass;
    return res;
}

}  // namespace rischan

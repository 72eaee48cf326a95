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

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rischan/estimation.hpp"
#include "rischan/io.hpp"
#include "rischan/presets.hpp"
#include "rischan/roundtrip.hpp"
#include "rischan/synthesis.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitToleranceBreach = 1;
constexpr int kExitInputError = 2;

std::string iso_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

rischan::ScenarioParams preset_from_arg(const std::string& arg) {
    const auto colon = arg.find(':');
    if (colon == std::string::npos)
        throw rischan::UnknownPreset("preset must be <scenario>:<mode>, got '" + arg + "'");
    return rischan::load_preset(arg.substr(0, colon), arg.substr(colon + 1));
}

rischan::EstimationConfig estimation_config_from_file(const std::string& path) {
    rischan::EstimationConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream f(path);
    if (!f) throw rischan::Error("cannot open config file '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(f);
    if (j.contains("detection")) {
        const auto& d = j["detection"];
        cfg.detection.noise_tail_fraction =
            d.value("noise_tail_fraction", cfg.detection.noise_tail_fraction);
        cfg.detection.threshold_above_noise_db =
            d.value("threshold_above_noise_db", cfg.detection.threshold_above_noise_db);
        cfg.detection.max_dynamic_range_db =
            d.value("max_dynamic_range_db", cfg.detection.max_dynamic_range_db);
    }
    if (j.contains("clustering")) {
        const auto& c = j["clustering"];
        cfg.clustering.k_min = c.value("k_min", cfg.clustering.k_min);
        cfg.clustering.k_max = c.value("k_max", cfg.clustering.k_max);
        cfg.clustering.max_iterations = c.value("max_iterations", cfg.clustering.max_iterations);
        cfg.clustering.sc_single_cluster_threshold =
            c.value("sc_single_cluster_threshold", cfg.clustering.sc_single_cluster_threshold);
    }
    if (j.contains("subband")) {
        const auto& s = j["subband"];
        cfg.subband.n_subbands = s.value("n_subbands", cfg.subband.n_subbands);
        cfg.subband.subband_width_hz = s.value("subband_width_hz", cfg.subband.subband_width_hz);
    }
    cfg.zero_pad_factor = j.value("zero_pad_factor", cfg.zero_pad_factor);
    cfg.ray_window_db = j.value("ray_window_db", cfg.ray_window_db);
    cfg.kf_exclude_above_db = j.value("kf_exclude_above_db", cfg.kf_exclude_above_db);
    return cfg;
}

rischan::RoundtripTolerances tolerances_from_file(const std::string& path) {
    rischan::RoundtripTolerances tol;
    if (path.empty()) return tol;
    std::ifstream f(path);
    if (!f) throw rischan::Error("cannot open tolerances file '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(f);
    tol.kf_mu_abs_db = j.value("kf_mu_abs_db", tol.kf_mu_abs_db);
    tol.kf_sigma_abs_db = j.value("kf_sigma_abs_db", tol.kf_sigma_abs_db);
    tol.cluster_count_abs = j.value("cluster_count_abs", tol.cluster_count_abs);
    tol.arrival_time_rel = j.value("arrival_time_rel", tol.arrival_time_rel);
    tol.decay_time_rel = j.value("decay_time_rel", tol.decay_time_rel);
    tol.arrival_rate_rel = j.value("arrival_rate_rel", tol.arrival_rate_rel);
    tol.rms_ds_rel = j.value("rms_ds_rel", tol.rms_ds_rel);
    return tol;
}

rischan::ReportFile report_from_estimate(const rischan::EstimationReport& est,
                                         std::uint64_t seed) {
    rischan::ReportFile rep;
    rep.timestamp = iso_timestamp();
    rep.seed = seed;
    rep.n_drops = est.n_drops;
    rep.estimated = est.params;
    rep.sample_counts = {
        {"drops_used", static_cast<double>(est.n_drops_used)},
        {"drops_skipped", static_cast<double>(est.n_drops_skipped)},
        {"kf_samples", static_cast<double>(est.n_kf_samples)},
        {"kf_excluded", static_cast<double>(est.n_kf_excluded)},
        {"cluster_gap_samples", static_cast<double>(est.n_gap_samples)},
        {"pre_cursor_rays", static_cast<double>(est.n_pre_rays)},
        {"post_cursor_rays", static_cast<double>(est.n_post_rays)},
        {"rms_ds_samples", static_cast<double>(est.n_rms_samples)},
    };
    rep.kf_db_per_drop = est.kf_db_per_drop;
    rep.chosen_k_per_drop = est.chosen_k_per_drop;
    return rep;
}

int cmd_estimate(const std::string& input_dir, const std::string& config_path,
                 const std::string& out_path) {
    const rischan::EstimationConfig cfg = estimation_config_from_file(config_path);

    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(input_dir))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw rischan::Error("no .csv sweep files found in '" + input_dir + "'");

    rischan::DropEnsemble ens;
    for (const auto& p : files) {
        rischan::FrequencySweep sweep = rischan::read_sweep(p.string());
        if (ens.scenario.empty()) {
            ens.scenario = sweep.label.scenario;
            ens.mode = sweep.label.mode;
        }
        ens.drops.emplace_back(std::move(sweep));
    }

    const rischan::EstimationReport est = rischan::estimate_scenario(ens, cfg);
    rischan::ReportFile rep = report_from_estimate(est, 0);
    rischan::write_report(out_path, rep);
    std::cout << "estimated " << est.n_drops_used << "/" << est.n_drops << " drops -> " << out_path
              << "\n";
    return kExitOk;
}

int cmd_synthesize(const std::string& preset_arg, std::size_t drops, std::uint64_t seed,
                   const std::string& out_dir, unsigned threads) {
    const rischan::ScenarioParams params = preset_from_arg(preset_arg);
    rischan::SynthesisConfig cfg;
    cfg.seed = seed;
    cfg.n_drops = drops;
    const rischan::DropEnsemble ens = rischan::synthesize_ensemble(params, cfg, threads);

    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < ens.drops.size(); ++i) {
        const auto& drop = std::get<rischan::SynthesizedDrop>(ens.drops[i]);
        char name[32];
        std::snprintf(name, sizeof(name), "cir_%05zu", i);
        const std::string base = (std::filesystem::path(out_dir) / name).string();
        rischan::write_cir(base + ".csv", drop.cir);
        rischan::write_ground_truth(base + ".gt.json", drop.ground_truth);
    }
    std::cout << "wrote " << ens.drops.size() << " drops to " << out_dir << "\n";
    return kExitOk;
}

int cmd_roundtrip(const std::string& preset_arg, std::size_t drops, std::uint64_t seed,
                  const std::string& tolerances_path, const std::string& out_path,
                  unsigned threads) {
    const rischan::ScenarioParams params = preset_from_arg(preset_arg);
    rischan::SynthesisConfig syn_cfg;
    syn_cfg.seed = seed;
    syn_cfg.n_drops = drops;
    const rischan::RoundtripTolerances tol = tolerances_from_file(tolerances_path);
    const rischan::RoundtripResult res =
        rischan::run_roundtrip(params, syn_cfg, rischan::EstimationConfig{}, tol, threads);

    rischan::ReportFile rep = report_from_estimate(res.estimate, seed);
    rep.preset = preset_arg;
    rep.reference = res.reference;
    rep.checks = res.checks;
    if (!out_path.empty()) rischan::write_report(out_path, rep);

    for (const auto& c : res.checks)
        std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name << " = " << c.value
                  << " (target " << c.target << (c.relative ? ", rel tol " : ", abs tol ")
                  << c.tolerance << ")\n";
    std::cout << (res.all_pass ? "roundtrip OK" : "roundtrip TOLERANCE BREACH") << "\n";
    return res.all_pass ? kExitOk : kExitToleranceBreach;
}

int cmd_pdp(const std::string& input, const std::string& cal_dir, const std::string& out_path,
            unsigned zero_pad) {
    rischan::FrequencySweep sweep = rischan::read_sweep(input);
    if (!cal_dir.empty()) {
        const std::filesystem::path dir(cal_dir);
        rischan::CalibrationSet cal{
            rischan::read_sweep((dir / "system.csv").string()),
            rischan::read_sweep((dir / "tx_antenna.csv").string()),
            rischan::read_sweep((dir / "rx_antenna.csv").string()),
        };
        sweep = rischan::calibrate(sweep, cal);
    }
    const rischan::ImpulseResponse cir = rischan::ctf_to_cir(sweep, zero_pad);
    rischan::Pdp pdp = rischan::compute_pdp(cir);
    pdp.noise_floor = rischan::estimate_noise_floor(pdp, rischan::DetectionConfig{}.noise_tail_fraction);
    rischan::write_pdp(out_path, pdp);
    std::cout << "wrote PDP (" << pdp.powers.size() << " bins) to " << out_path << "\n";
    return kExitOk;
}

int cmd_presets() {
    std::printf("%-10s %-5s %8s %9s  %s\n", "scenario", "mode", "kf_mu_db", "kf_sigma", "cluster model");
    for (const rischan::ScenarioParams& p : rischan::list_presets()) {
        std::string blocks = "-";
        if (p.inter && p.intra) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "clusters=%.3g arrival=%.4gns rays=%.3g rms_ds=%.3gns "
                          "pre=(%.3gns,%.3g/ns) post=(%.3gns,%.3g/ns)",
                          p.inter->avg_num_clusters, p.inter->mean_cluster_arrival_time_ns,
                          p.intra->avg_num_rays, p.intra->rms_ds_ns,
                          p.intra->pre.power_decay_time_ns, p.intra->pre.arrival_rate_per_ns,
                          p.intra->post.power_decay_time_ns, p.intra->post.arrival_rate_per_ns);
            blocks = buf;
        }
        std::printf("%-10s %-5s %8.3g %9.3g  %s\n", rischan::to_string(p.scenario).c_str(),
                    rischan::to_string(p.mode).c_str(), p.kf.mu_db, p.kf.sigma_db, blocks.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"small-scale channel estimation and synthesis toolkit"};
    app.require_subcommand(1);

    std::string input, config_path, out_path, preset_arg, cal_dir, tolerances_path;
    std::size_t drops = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    unsigned zero_pad = 4;
    bool list_flag = false;

    auto* est = app.add_subcommand("estimate", "run the estimation pipeline on a sweep directory");
    est->add_option("--input", input, "directory of sweep .csv files")->required();
    est->add_option("--config", config_path, "JSON estimation config");
    est->add_option("--out", out_path, "output report (JSON)")->required();

    auto* syn = app.add_subcommand("synthesize", "generate stochastic drops from a preset");
    syn->add_option("--preset", preset_arg, "<scenario>:<mode>, e.g. outdoor:IRWR")->required();
    syn->add_option("--drops", drops, "number of drops")->required();
    syn->add_option("--seed", seed, "RNG seed");
    syn->add_option("--out", out_path, "output directory")->required();
    syn->add_option("--threads", threads, "worker threads");

    auto* rt = app.add_subcommand("roundtrip", "synthesize, re-estimate and compare to the preset");
    rt->add_option("--preset", preset_arg, "<scenario>:<mode>")->required();
    rt->add_option("--drops", drops, "number of drops")->required();
    rt->add_option("--seed", seed, "RNG seed");
    rt->add_option("--tolerances", tolerances_path, "JSON tolerance overrides");
    rt->add_option("--out", out_path, "output report (JSON)");
    rt->add_option("--threads", threads, "worker threads");

    auto* pdp = app.add_subcommand("pdp", "calibrate one sweep and emit its PDP");
    pdp->add_option("--input", input, "sweep .csv file")->required();
    pdp->add_option("--cal", cal_dir,
                    "calibration directory (system.csv, tx_antenna.csv, rx_antenna.csv)");
    pdp->add_option("--out", out_path, "output PDP file")->required();
    pdp->add_option("--zero-pad", zero_pad, "delay interpolation factor");

    auto* pre = app.add_subcommand("presets", "parameter registry");
    pre->add_flag("--list", list_flag, "print all presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (est->parsed()) return cmd_estimate(input, config_path, out_path);
        if (syn->parsed()) return cmd_synthesize(preset_arg, drops, seed, out_path, threads);
        if (rt->parsed())
            return cmd_roundtrip(preset_arg, drops, seed, tolerances_path, out_path, threads);
        if (pdp->parsed()) return cmd_pdp(input, cal_dir, out_path, zero_pad);
        if (pre->parsed()) return cmd_presets();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

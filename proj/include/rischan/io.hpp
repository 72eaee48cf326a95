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

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rischan/roundtrip.hpp"
#include "rischan/synthesis.hpp"
#include "rischan/types.hpp"

// Plain-text carriers: comma-separated data files with a single '#' header
// line of key=value metadata (keys carry explicit unit suffixes), complex
// values as two real columns, and JSON reports. Numeric fields are written
// with 12 significant digits so emitted files re-parse to equal values.

namespace rischan {

class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

class UnitMismatch : public Error {
  public:
    using Error::Error;
};

namespace detail {

inline std::string fmt_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::map<std::string, std::string> parse_header(const std::string& line,
                                                       const std::string& expected_kind) {
    if (line.empty() || line[0] != '#') throw ParseError("missing '#' header line", 1);
    std::istringstream ss(line.substr(1));
    std::string kind;
    ss >> kind;
    if (kind != expected_kind)
        throw ParseError("expected '" + expected_kind + "' header, got '" + kind + "'", 1);
    std::map<std::string, std::string> kv;
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("malformed header token '" + tok + "'", 1);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

/// Header values are unit-suffixed; a key present with a different suffix is
/// a unit problem, a key absent entirely is a parse problem.
inline std::string require_key(const std::map<std::string, std::string>& kv,
                               const std::string& key) {
    if (const auto it = kv.find(key); it != kv.end()) return it->second;
    const std::string stem = key.substr(0, key.rfind('_'));
    for (const auto& [k, v] : kv)
        if (k.size() > stem.size() && k.compare(0, stem.size(), stem) == 0 && k[stem.size()] == '_')
            throw UnitMismatch("header key '" + k + "' does not carry the expected unit ('" + key +
                               "')");
    throw ParseError("missing header key '" + key + "'", 1);
}

inline double to_double(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + s + "'", line);
    }
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    return f;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open '" + path + "' for reading");
    return f;
}

}  // namespace detail

// ---------------------------------------------------------------- sweep files

inline void write_sweep(const std::string& path, const FrequencySweep& sweep) {
    auto f = detail::open_out(path);
    f << "# sweep scenario=" << (sweep.label.scenario.empty() ? "-" : sweep.label.scenario)
      << " mode=" << (sweep.label.mode.empty() ? "-" : sweep.label.mode)
      << " position=" << (sweep.label.position.empty() ? "-" : sweep.label.position)
      << " start_hz=" << detail::fmt_g12(sweep.grid.start_hz)
      << " stop_hz=" << detail::fmt_g12(sweep.grid.stop_hz)
      << " n_points=" << sweep.grid.n_points << "\n";
    for (std::size_t k = 0; k < sweep.gains.size(); ++k)
        f << detail::fmt_g12(sweep.grid.frequency_hz(k)) << ","
          << detail::fmt_g12(sweep.gains[k].real()) << ","
          << detail::fmt_g12(sweep.gains[k].imag()) << "\n";
}

inline FrequencySweep read_sweep(const std::string& path) {
    auto f = detail::open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw ParseError("empty file", 1);
    const auto kv = detail::parse_header(line, "sweep");

    FrequencySweep sweep;
    sweep.grid.start_hz = detail::to_double(detail::require_key(kv, "start_hz"), 1);
    sweep.grid.stop_hz = detail::to_double(detail::require_key(kv, "stop_hz"), 1);
    sweep.grid.n_points =
        static_cast<std::size_t>(detail::to_double(detail::require_key(kv, "n_points"), 1));
    auto label_of = [&](const char* key) {
        const auto it = kv.find(key);
        return (it == kv.end() || it->second == "-") ? std::string{} : it->second;
    };
    sweep.label = {label_of("scenario"), label_of("mode"), label_of("position")};
    if (!sweep.grid.valid()) throw ParseError("invalid grid in header", 1);

    std::size_t lineno = 1;
    double prev_freq = -std::numeric_limits<double>::infinity();
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = detail::split_csv(line);
        if (cols.size() != 3) throw ParseError("expected 3 columns", lineno);
        const double freq = detail::to_double(cols[0], lineno);
        if (freq <= prev_freq) throw ParseError("frequencies must be strictly increasing", lineno);
        prev_freq = freq;
        sweep.gains.emplace_back(detail::to_double(cols[1], lineno),
                                 detail::to_double(cols[2], lineno));
    }
    if (sweep.gains.size() != sweep.grid.n_points)
        throw ParseError("row count " + std::to_string(sweep.gains.size()) +
                             " does not match header n_points " +
                             std::to_string(sweep.grid.n_points),
                         lineno + 1);
    return sweep;
}

// ---------------------------------------------------------------- CIR files

inline void write_cir(const std::string& path, const ImpulseResponse& cir) {
    auto f = detail::open_out(path);
    f << "# cir t0_ns=" << detail::fmt_g12(cir.t0_ns)
      << " delay_step_ns=" << detail::fmt_g12(cir.delay_step_ns) << " n_taps=" << cir.taps.size()
      << "\n";
    for (std::size_t k = 0; k < cir.taps.size(); ++k)
        f << detail::fmt_g12(cir.delay_ns(k)) << "," << detail::fmt_g12(cir.taps[k].real()) << ","
          << detail::fmt_g12(cir.taps[k].imag()) << "\n";
}

inline ImpulseResponse read_cir(const std::string& path) {
    auto f = detail::open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw ParseError("empty file", 1);
    const auto kv = detail::parse_header(line, "cir");
    ImpulseResponse cir;
    cir.t0_ns = detail::to_double(detail::require_key(kv, "t0_ns"), 1);
    cir.delay_step_ns = detail::to_double(detail::require_key(kv, "delay_step_ns"), 1);
    const auto n_taps =
        static_cast<std::size_t>(detail::to_double(detail::require_key(kv, "n_taps"), 1));
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = detail::split_csv(line);
        if (cols.size() != 3) throw ParseError("expected 3 columns", lineno);
        cir.taps.emplace_back(detail::to_double(cols[1], lineno),
                              detail::to_double(cols[2], lineno));
    }
    if (cir.taps.size() != n_taps)
        throw ParseError("row count does not match header n_taps", lineno + 1);
    return cir;
}

// ---------------------------------------------------------------- PDP files

/// Plot-oriented: powers are emitted in dB (zero-power bins as -inf).
inline void write_pdp(const std::string& path, const Pdp& pdp) {
    auto f = detail::open_out(path);
    f << "# pdp n_bins=" << pdp.powers.size()
      << " noise_floor_db=" << detail::fmt_g12(pdp.noise_floor > 0.0
                                                   ? linear_to_db(pdp.noise_floor)
                                                   : -std::numeric_limits<double>::infinity())
      << "\n";
    for (std::size_t k = 0; k < pdp.powers.size(); ++k)
        f << detail::fmt_g12(pdp.delays_ns[k]) << ","
          << detail::fmt_g12(pdp.powers[k] > 0.0 ? linear_to_db(pdp.powers[k])
                                                 : -std::numeric_limits<double>::infinity())
          << "\n";
}

inline Pdp read_pdp(const std::string& path) {
    auto f = detail::open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw ParseError("empty file", 1);
    const auto kv = detail::parse_header(line, "pdp");
    const auto n =
        static_cast<std::size_t>(detail::to_double(detail::require_key(kv, "n_bins"), 1));
    Pdp pdp;
    const double floor_db = detail::to_double(detail::require_key(kv, "noise_floor_db"), 1);
    pdp.noise_floor = std::isfinite(floor_db) ? db_to_linear(floor_db) : 0.0;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = detail::split_csv(line);
        if (cols.size() != 2) throw ParseError("expected 2 columns", lineno);
        pdp.delays_ns.push_back(detail::to_double(cols[0], lineno));
        const double db = detail::to_double(cols[1], lineno);
        pdp.powers.push_back(std::isfinite(db) ? db_to_linear(db) : 0.0);
    }
    if (pdp.powers.size() != n) throw ParseError("row count does not match header n_bins", lineno + 1);
    return pdp;
}

// ---------------------------------------------------------------- JSON pieces

namespace detail {

inline nlohmann::json json_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;  // JSON has no inf/nan
}

inline nlohmann::json params_to_json(const ScenarioParams& p) {
    nlohmann::json j;
    j["scenario"] = to_string(p.scenario);
    j["mode"] = to_string(p.mode);
    j["kf_mu_db"] = json_or_null(p.kf.mu_db);
    j["kf_sigma_db"] = json_or_null(p.kf.sigma_db);
    j["los_delay_ns"] = json_or_null(p.los_delay_ns);
    if (p.inter) {
        j["inter"] = {{"avg_num_clusters", json_or_null(p.inter->avg_num_clusters)},
                      {"cluster_arrival_rate_per_ns",
                       json_or_null(p.inter->cluster_arrival_rate_per_ns)},
                      {"mean_cluster_arrival_time_ns",
                       json_or_null(p.inter->mean_cluster_arrival_time_ns)},
                      {"cluster_power_decay_per_ns",
                       json_or_null(p.inter->cluster_power_decay_per_ns)}};
    }
    if (p.intra) {
        auto cursor = [&](const CursorParams& c) {
            return nlohmann::json{{"power_decay_time_ns", json_or_null(c.power_decay_time_ns)},
                                  {"avg_num_rays", json_or_null(c.avg_num_rays)},
                                  {"arrival_rate_per_ns", json_or_null(c.arrival_rate_per_ns)}};
        };
        j["intra"] = {{"avg_num_rays", json_or_null(p.intra->avg_num_rays)},
                      {"rms_ds_ns", json_or_null(p.intra->rms_ds_ns)},
                      {"pre", cursor(p.intra->pre)},
                      {"post", cursor(p.intra->post)}};
    }
    return j;
}

inline nlohmann::json ground_truth_to_json(const GroundTruth& gt) {
    auto ray = [](const RayDraw& r) {
        return nlohmann::json{{"rel_delay_ns", r.rel_delay_ns},
                              {"envelope", r.envelope},
                              {"amplitude", r.amplitude},
                              {"phase_rad", r.phase_rad}};
    };
    nlohmann::json clusters = nlohmann::json::array();
    for (const ClusterDraw& c : gt.clusters) {
        nlohmann::json jc;
        jc["delay_ns"] = c.delay_ns;
        jc["anchor_amplitude"] = c.anchor_amplitude;
        jc["center"] = ray(c.center);
        jc["pre"] = nlohmann::json::array();
        for (const RayDraw& r : c.pre) jc["pre"].push_back(ray(r));
        jc["post"] = nlohmann::json::array();
        for (const RayDraw& r : c.post) jc["post"].push_back(ray(r));
        clusters.push_back(jc);
    }
    return nlohmann::json{{"k_db", gt.k_db},
                          {"los_delay_ns", gt.los_delay_ns},
                          {"los_amplitude", gt.los_amplitude},
                          {"ray_scale", gt.ray_scale},
                          {"clusters", clusters},
                          {"background_clusters", nlohmann::json::array()}};
}

}  // namespace detail

// ---------------------------------------------------------------- reports

/// Estimation/round-trip report. Rates and times carry unit-suffixed keys.
/// Two runs with identical inputs produce byte-identical files except for the
/// timestamp field.
struct ReportFile {
    std::string tool = "rischan";
    std::string version = "0.1.0";
    std::string timestamp;  // ISO-8601; excluded from stability comparisons
    std::uint64_t seed = 0;
    std::size_t n_drops = 0;
    std::string preset;  // "scenario:mode" when applicable
    ScenarioParams estimated;
    std::optional<ScenarioParams> reference;
    std::vector<RoundtripCheck> checks;
    std::map<std::string, double> sample_counts;
    std::vector<double> kf_db_per_drop;
    std::vector<int> chosen_k_per_drop;
};

inline nlohmann::json report_to_json(const ReportFile& rep) {
    nlohmann::json j;
    j["tool"] = rep.tool;
    j["version"] = rep.version;
    j["timestamp"] = rep.timestamp;
    j["seed"] = rep.seed;
    j["n_drops"] = rep.n_drops;
    if (!rep.preset.empty()) j["preset"] = rep.preset;
    j["estimated"] = detail::params_to_json(rep.estimated);
    if (rep.reference) j["reference"] = detail::params_to_json(*rep.reference);
    if (!rep.checks.empty()) {
        nlohmann::json checks = nlohmann::json::array();
        for (const RoundtripCheck& c : rep.checks)
            checks.push_back({{"name", c.name},
                              {"value", detail::json_or_null(c.value)},
                              {"target", c.target},
                              {"tolerance", c.tolerance},
                              {"relative", c.relative},
                              {"pass", c.pass}});
        j["checks"] = checks;
    }
    j["sample_counts"] = rep.sample_counts;
    nlohmann::json diag;
    diag["kf_db_per_drop"] = nlohmann::json::array();
    for (double v : rep.kf_db_per_drop) diag["kf_db_per_drop"].push_back(detail::json_or_null(v));
    diag["chosen_k_per_drop"] = rep.chosen_k_per_drop;
    j["per_drop"] = diag;
    return j;
}

inline void write_report(const std::string& path, const ReportFile& rep) {
    auto f = detail::open_out(path);
    f << report_to_json(rep).dump(2) << "\n";
}

inline void write_ground_truth(const std::string& path, const GroundTruth& gt) {
    auto f = detail::open_out(path);
    f << detail::ground_truth_to_json(gt).dump(2) << "\n";
}

/// Report content with the timestamp blanked, for stability comparisons.
inline std::string report_stable_text(const ReportFile& rep) {
    nlohmann::json j = report_to_json(rep);
    j["timestamp"] = "";
    return j.dump(2);
}

}  // namespace rischan

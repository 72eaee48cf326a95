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
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Unit conventions used throughout the library:
//   - delays and times in nanoseconds
//   - frequencies in Hz
//   - rates in 1/ns
//   - powers and amplitudes in linear units; dB only at IO boundaries
// All types below are immutable value objects after construction and are
// safe to share across threads.

namespace rischan {

using cplx = std::complex<double>;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double p) { return 10.0 * std::log10(p); }

// ---------------------------------------------------------------- errors

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
  public:
    using Error::Error;
};

class ZeroCalibrationSample : public Error {
  public:
    ZeroCalibrationSample(const std::string& msg, std::size_t index)
        : Error(msg), index(index) {}
    std::size_t index;
};

class EmptyResult : public Error {
  public:
    using Error::Error;
};

class TooFewPoints : public Error {
  public:
    using Error::Error;
};

class TooFewSamples : public Error {
  public:
    using Error::Error;
};

class TooFewRays : public Error {
  public:
    using Error::Error;
};

class InsufficientClusters : public Error {
  public:
    using Error::Error;
};

class MissingClusterModel : public Error {
  public:
    using Error::Error;
};

class UnknownPreset : public Error {
  public:
    using Error::Error;
};

class DelayOutOfRange : public Error {
  public:
    using Error::Error;
};

// ---------------------------------------------------------------- grids

/// Uniform frequency grid. spacing = (stop - start) / (n_points - 1).
struct FrequencyGrid {
    double start_hz = 0.0;
    double stop_hz = 0.0;
    std::size_t n_points = 0;

    double spacing_hz() const {
        return (stop_hz - start_hz) / static_cast<double>(n_points - 1);
    }
    double span_hz() const { return stop_hz - start_hz; }
    double frequency_hz(std::size_t k) const {
        return start_hz + static_cast<double>(k) * spacing_hz();
    }
    /// Unambiguous delay span of the sampled band, 1/spacing, in ns.
    double unambiguous_span_ns() const { return 1.0e9 / spacing_hz(); }

    bool valid() const { return n_points >= 2 && stop_hz > start_hz; }

    bool operator==(const FrequencyGrid&) const = default;
};

/// 2.5-2.69 GHz, 191 points (1 MHz spacing). The sweep layout all presets
/// and defaults assume.
inline FrequencyGrid default_grid() { return FrequencyGrid{2.5e9, 2.69e9, 191}; }

struct SweepLabel {
    std::string scenario;
    std::string mode;
    std::string position;

    bool operator==(const SweepLabel&) const = default;
};

/// Complex channel transfer function samples on a uniform frequency grid.
struct FrequencySweep {
    FrequencyGrid grid;
    std::vector<cplx> gains;  // dimensionless voltage gain, one per grid point
    SweepLabel label;
};

/// Complex delay-domain taps on a uniform delay grid starting at t0_ns.
struct ImpulseResponse {
    double delay_step_ns = 0.0;
    double t0_ns = 0.0;
    std::vector<cplx> taps;

    double delay_ns(std::size_t k) const {
        return t0_ns + static_cast<double>(k) * delay_step_ns;
    }
};

/// Power delay profile: |taps|^2 per delay bin. noise_floor is 0 until
/// estimated by the detector.
struct Pdp {
    std::vector<double> delays_ns;
    std::vector<double> powers;  // linear, nonnegative
    double noise_floor = 0.0;    // linear
};

// ---------------------------------------------------------------- multipath

/// One detected (or drawn) multipath component.
struct Mpc {
    double delay_ns = 0.0;
    double amplitude = 0.0;  // linear magnitude, >= 0
    std::optional<cplx> complex_gain;
};

using MpcSet = std::vector<Mpc>;

/// A delay-domain cluster of MPCs. rays are ordered by delay and the center
/// is the highest-amplitude ray (ties resolved toward the smallest delay).
struct Cluster {
    std::vector<Mpc> rays;
    std::size_t center_index = 0;

    const Mpc& center() const { return rays.at(center_index); }
};

/// Builds a Cluster from an unordered ray set: sorts by delay and designates
/// the max-amplitude ray as center.
inline Cluster make_cluster(std::vector<Mpc> rays) {
    if (rays.empty()) throw TooFewPoints("make_cluster: empty ray set");
    std::stable_sort(rays.begin(), rays.end(),
                     [](const Mpc& a, const Mpc& b) { return a.delay_ns < b.delay_ns; });
    std::size_t center = 0;
    for (std::size_t i = 1; i < rays.size(); ++i)
        if (rays[i].amplitude > rays[center].amplitude) center = i;
    return Cluster{std::move(rays), center};
}

// ---------------------------------------------------------------- parameters

/// Gaussian fit of the per-drop K-factor in dB.
struct GlobalKfParams {
    double mu_db = 0.0;
    double sigma_db = 0.0;
};

/// Pre- or post-cursor ray statistics of a cluster.
struct CursorParams {
    double power_decay_time_ns = 0.0;  // gamma
    double avg_num_rays = 0.0;
    double arrival_rate_per_ns = 0.0;  // lambda
};

struct IntraClusterParams {
    double avg_num_rays = 0.0;
    double rms_ds_ns = 0.0;
    CursorParams pre;
    CursorParams post;
};

struct InterClusterParams {
    double avg_num_clusters = 0.0;
    double cluster_arrival_rate_per_ns = 0.0;
    double mean_cluster_arrival_time_ns = 0.0;
    double cluster_power_decay_per_ns = 0.0;
};

enum class Scenario { outdoor, indoor, o2i_left, o2i_right };
enum class Mode { irwr, srwr, wr };

inline std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::outdoor: return "outdoor";
        case Scenario::indoor: return "indoor";
        case Scenario::o2i_left: return "o2i_left";
        case Scenario::o2i_right: return "o2i_right";
    }
    return "?";
}

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::irwr: return "IRWR";
        case Mode::srwr: return "SRWR";
        case Mode::wr: return "WR";
    }
    return "?";
}

inline Scenario parse_scenario(const std::string& s) {
    if (s == "outdoor") return Scenario::outdoor;
    if (s == "indoor") return Scenario::indoor;
    if (s == "o2i_left") return Scenario::o2i_left;
    if (s == "o2i_right") return Scenario::o2i_right;
    throw UnknownPreset("unknown scenario: " + s);
}

inline Mode parse_mode(const std::string& s) {
    if (s == "IRWR" || s == "irwr") return Mode::irwr;
    if (s == "SRWR" || s == "srwr") return Mode::srwr;
    if (s == "WR" || s == "wr") return Mode::wr;
    throw UnknownPreset("unknown mode: " + s);
}

/// Full fitted parameter bundle for one (scenario, mode). Cluster blocks are
/// present for IRWR only; SRWR/WR carry the global KF alone.
struct ScenarioParams {
    Scenario scenario = Scenario::outdoor;
    Mode mode = Mode::irwr;
    GlobalKfParams kf;
    std::optional<InterClusterParams> inter;
    std::optional<IntraClusterParams> intra;
    double los_delay_ns = 0.0;
};

/// Collects all invariant violations; empty result means the bundle is valid.
/// Violations are data, not failures.
inline std::vector<std::string> validate(const ScenarioParams& p) {
    std::vector<std::string> v;
    if (!(p.kf.sigma_db >= 0.0)) v.push_back("sigma_db >= 0");
    if (!(p.los_delay_ns >= 0.0)) v.push_back("los_delay_ns >= 0");
    if (p.mode != Mode::irwr && (p.inter || p.intra))
        v.push_back("non-IRWR params must not carry cluster blocks");
    if (p.inter) {
        const auto& ic = *p.inter;
        if (!(ic.avg_num_clusters >= 1.0)) v.push_back("avg_num_clusters >= 1");
        if (!(ic.cluster_arrival_rate_per_ns > 0.0)) v.push_back("cluster_arrival_rate_per_ns > 0");
        if (!(ic.mean_cluster_arrival_time_ns > 0.0))
            v.push_back("mean_cluster_arrival_time_ns > 0");
        if (ic.cluster_arrival_rate_per_ns > 0.0 && ic.mean_cluster_arrival_time_ns > 0.0) {
            const double inv = 1.0 / ic.mean_cluster_arrival_time_ns;
            const double rel =
                std::abs(ic.cluster_arrival_rate_per_ns - inv) / ic.cluster_arrival_rate_per_ns;
            if (rel > 0.10)
                v.push_back("cluster_arrival_rate_per_ns != 1/mean_cluster_arrival_time_ns "
                            "within 10%");
        }
        if (!(ic.cluster_power_decay_per_ns >= 0.0)) v.push_back("cluster_power_decay_per_ns >= 0");
    }
    if (p.intra) {
        const auto& in = *p.intra;
        if (!(in.avg_num_rays > 0.0)) v.push_back("intra avg_num_rays > 0");
        if (!(in.rms_ds_ns > 0.0)) v.push_back("rms_ds_ns > 0");
        for (const auto* c : {&in.pre, &in.post}) {
            if (!(c->power_decay_time_ns > 0.0)) v.push_back("cursor power_decay_time_ns > 0");
            if (!(c->arrival_rate_per_ns > 0.0)) v.push_back("cursor arrival_rate_per_ns > 0");
            if (!(c->avg_num_rays > 0.0)) v.push_back("cursor avg_num_rays > 0");
        }
    }
    return v;
}

}  // namespace rischan

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

#include <string>
#include <vector>

#include "rischan/types.hpp"

// Measured small-scale parameter registry for the 2.6 GHz campaign: four
// scenario columns (the two O2I aisles share one cluster block) by three
// propagation modes. Cluster structure exists for the IRWR mode only; SRWR
// and WR entries are KF-only.

namespace rischan {

namespace detail {

constexpr double k_c_m_per_ns = 0.299792458;

/// Virtual LOS delay at the shortest measured Tx-RIS-Rx range.
inline double geometric_los_delay_ns(double path_m) { return path_m / k_c_m_per_ns; }

inline InterClusterParams outdoor_inter() { return {2.3, 0.008, 126.5, 0.03}; }
inline InterClusterParams indoor_inter() { return {2.2, 0.006, 179.68, 0.03}; }
inline InterClusterParams o2i_inter() { return {2.4, 0.012, 85.2, 0.05}; }

inline IntraClusterParams outdoor_intra() {
    return {47.0, 4.63, CursorParams{5.62, 16.0, 0.27}, CursorParams{6.31, 30.0, 0.34}};
}
inline IntraClusterParams indoor_intra() {
    return {52.0, 4.41, CursorParams{5.56, 16.0, 0.29}, CursorParams{7.09, 35.0, 0.31}};
}
inline IntraClusterParams o2i_intra() {
    return {34.0, 3.64, CursorParams{6.58, 12.0, 0.36}, CursorParams{6.39, 21.0, 0.36}};
}

}  // namespace detail

inline ScenarioParams load_preset(Scenario scenario, Mode mode) {
    ScenarioParams p;
    p.scenario = scenario;
    p.mode = mode;

    switch (scenario) {
        case Scenario::outdoor:
            p.los_delay_ns = detail::geometric_los_delay_ns(10.0);  // 5 m + 5 m
            switch (mode) {
                case Mode::irwr: p.kf = {15.7, 4.6}; break;
                case Mode::srwr: p.kf = {14.4, 3.9}; break;
                case Mode::wr: p.kf = {2.4, 3.7}; break;
            }
            if (mode == Mode::irwr) {
                p.inter = detail::outdoor_inter();
                p.intra = detail::outdoor_intra();
            }
            break;
        case Scenario::indoor:
            p.los_delay_ns = detail::geometric_los_delay_ns(10.0);  // 5 m + 5 m
            switch (mode) {
                case Mode::irwr: p.kf = {12.0, 4.2}; break;
                case Mode::srwr: p.kf = {10.0, 4.0}; break;
                case Mode::wr: p.kf = {2.0, 3.5}; break;
            }
            if (mode == Mode::irwr) {
                p.inter = detail::indoor_inter();
                p.intra = detail::indoor_intra();
            }
            break;
        case Scenario::o2i_left:
            p.los_delay_ns = detail::geometric_los_delay_ns(11.26);  // 9 m + 2.26 m
            switch (mode) {
                case Mode::irwr: p.kf = {20.0, 2.9}; break;
                case Mode::srwr: p.kf = {13.8, 4.4}; break;
                case Mode::wr: p.kf = {1.6, 2.2}; break;
            }
            if (mode == Mode::irwr) {
                p.inter = detail::o2i_inter();
                p.intra = detail::o2i_intra();
            }
            break;
        case Scenario::o2i_right:
            p.los_delay_ns = detail::geometric_los_delay_ns(11.26);  // 9 m + 2.26 m
            switch (mode) {
                case Mode::irwr: p.kf = {16.8, 2.4}; break;
                case Mode::srwr: p.kf = {3.3, 2.1}; break;
                case Mode::wr: p.kf = {4.0, 2.4}; break;
            }
            if (mode == Mode::irwr) {
                p.inter = detail::o2i_inter();
                p.intra = detail::o2i_intra();
            }
            break;
    }
    return p;
}

inline ScenarioParams load_preset(const std::string& scenario, const std::string& mode) {
    return load_preset(parse_scenario(scenario), parse_mode(mode));
}

/// All registry entries, scenario-major.
inline std::vector<ScenarioParams> list_presets() {
    std::vector<ScenarioParams> all;
    for (Scenario s :
         {Scenario::outdoor, Scenario::indoor, Scenario::o2i_left, Scenario::o2i_right})
        for (Mode m : {Mode::irwr, Mode::srwr, Mode::wr}) all.push_back(load_preset(s, m));
    return all;
}

}  // namespace rischan

// SPDX-License-Identifier: Apache-2.0
//
// beamkit - secondary-user beamforming on top of a zero-forcing SDMA downlink
// Copyright (C) 2026 the beamkit authors
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

#include "beamkit/experiments.hpp"
#include "beamkit/model.hpp"
#include "beamkit/precoding.hpp"
#include "beamkit/rates.hpp"
#include "beamkit/rng.hpp"
#include "beamkit/units.hpp"

namespace beamkit::testing {

// Workhorse scenario: two orthonormal primary channels on the standard
// basis, secondary halfway between them, 1 W legacy power, -10 dBm noise.
// Closed forms: c = 1/sqrt(2), |p_k|^2 = 0.5, effective gain 0.5,
// tau_k = 0.4999 W, a0 = a_i = 0.5001 W.
inline Scenario ortho2(double p0_dbm = 30.0) {
    Scenario s;
    s.channels.primary = arma::eye<arma::cx_mat>(2, 2);
    s.channels.secondary = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    s.channels.noise_power_w = 1e-4;
    s.power.p_sdma_w = 1.0;
    s.power.p0_w = dbm_to_watts(p0_dbm);
    s.qos.targets_bpcu = {1.0, 1.0};
    return s;
}

// ortho2 with the secondary channel rotated: theta = pi/2 aligns it with
// the first primary user, theta = 0 with the second.
inline Scenario ortho2_theta(double theta, double p0_dbm = 30.0) {
    Scenario s = ortho2(p0_dbm);
    s.channels.secondary = {std::sin(theta), std::cos(theta)};
    return s;
}

// One random drop from the Monte-Carlo generator, as a full scenario.
inline Scenario random_deployment(arma::uword k, std::uint64_t master_seed,
                                  std::uint64_t trial, double p0_dbm = 30.0) {
    DeploymentConfig config;
    config.k_users = k;
    config.master_seed = master_seed;
    return deployment_scenario(config, sample_deployment(config, trial), p0_dbm);
}

struct Built {
    Scenario scenario;
    Precoder precoder;
    RateContext ctx;
};

inline Built build(const Scenario& s) {
    Built b;
    b.scenario = s;
    b.precoder = zf_precoder(s.channels, s.power.p_sdma_w);
    b.ctx = build_context(s.channels, b.precoder, s.qos);
    return b;
}

} // namespace beamkit::testing

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

#include "beamkit/model.hpp"

namespace beamkit {

void validate(const Scenario& scenario) {
    const ChannelSet& ch = scenario.channels;
    const arma::uword n = ch.n_antennas();
    const arma::uword k = ch.n_users();

    if (n == 0 || k == 0)
        throw std::invalid_argument("scenario: empty channel matrix");
    if (k > n)
        throw std::invalid_argument("scenario: K exceeds N (zero-forcing needs full column rank)");
    if (ch.secondary.n_elem != n)
        throw std::invalid_argument("scenario: dimension mismatch between secondary channel and antenna count");
    if (!ch.primary.is_finite() || !ch.secondary.is_finite())
        throw std::invalid_argument("scenario: nonfinite channel entry");
    if (!(ch.noise_power_w > 0.0) || !std::isfinite(ch.noise_power_w))
        throw std::invalid_argument("scenario: noise power must be positive");
    if (!(scenario.power.p_sdma_w > 0.0) || !std::isfinite(scenario.power.p_sdma_w))
        throw std::invalid_argument("scenario: legacy transmit power must be positive");
    if (!(scenario.power.p0_w > 0.0) || !std::isfinite(scenario.power.p0_w))
        throw std::invalid_argument("scenario: secondary power budget must be positive");
    if (scenario.qos.targets_bpcu.n_elem != k)
        throw std::invalid_argument("scenario: dimension mismatch between rate targets and user count");
    if (!scenario.qos.targets_bpcu.is_finite() || scenario.qos.targets_bpcu.min() <= 0.0)
        throw std::invalid_argument("scenario: rate targets must be positive");
}

} // namespace beamkit

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

#include <armadillo>
#include <vector>

#include "beamkit/model.hpp"
#include "beamkit/precoding.hpp"

namespace beamkit {

// Interference totals and per-user interference headroom, fixed once the
// legacy precoder is in place. tau_w(k) is the largest secondary power
// user k can absorb on its channel while still reaching its rate floor:
//   tau_k = max{0, |h_k^H p_k|^2 / (2^{R_k} - 1) - sigma^2}.
// A clamped (zero) entry means the legacy design alone cannot meet that
// user's floor.
struct RateContext {
    double interference_secondary_w = 0.0; // ||g^H P||^2, legacy power seen by the secondary
    arma::vec interference_primary_w;      // ||h_k^H P||^2 per user (= |h_k^H p_k|^2 under ZF)
    arma::vec tau_w;                       // per-user headroom
    double noise_power_w = 0.0;

    bool legacy_infeasible() const { return tau_w.min() <= 0.0; }
};

RateContext build_context(const ChannelSet& channels, const Precoder& precoder,
                          const QosSpec& qos);

// Secondary-user rate when nobody cancels it: the legacy beams are noise.
double rate_no_sic(const arma::cx_vec& w, const ChannelSet& channels,
                   const RateContext& ctx);

// Secondary-user rate when the users in `sic` decode and subtract the
// secondary signal first; the rate is limited by the weakest such decoder.
// Throws std::invalid_argument on an empty set.
double rate_partial_sic(const arma::cx_vec& w, const SicSet& sic,
                        const ChannelSet& channels, const RateContext& ctx);

// Every primary user cancels the secondary signal.
double rate_full_sic(const arma::cx_vec& w, const ChannelSet& channels,
                     const RateContext& ctx);

// Per-user check of the interference caps |h_k^H w|^2 <= tau_k, with a
// relative tolerance so active constraints do not flicker on float noise.
std::vector<bool> qos_satisfied(const arma::cx_vec& w, const ChannelSet& channels,
                                const RateContext& ctx);

} // namespace beamkit

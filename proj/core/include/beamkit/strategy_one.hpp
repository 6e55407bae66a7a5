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

#include "beamkit/model.hpp"
#include "beamkit/precoding.hpp"
#include "beamkit/rates.hpp"

namespace beamkit {

// "Ride an existing beam": serve the secondary user on w = sqrt(alpha) p_i
// for one of the K legacy beams. Zero-forcing keeps every other user clean,
// so each candidate reduces to a scalar power choice with a closed form.
enum class RiderMode {
    NoSic,      // user i decodes its own signal directly; alpha is capped by
                // both the power budget and user i's interference headroom
    SicAtOwner, // user i cancels the secondary signal first; full budget
};

struct RiderCandidate {
    arma::uword beam_index = 0;
    RiderMode mode = RiderMode::NoSic;
    double alpha = 0.0; // power scale, ||w||^2 = alpha |p_i|^2
    double rate_bpcu = 0.0;
};

// alpha* = min{ P0 / |p_i|^2, tau_i / |h_i^H p_i|^2 }. A clamped headroom
// (tau_i = 0) yields alpha = 0 and rate 0.
RiderCandidate solve_rider_no_sic(arma::uword beam_index, const ChannelSet& channels,
                                  const Precoder& precoder, const RateContext& ctx,
                                  const PowerBudget& budget);

// alpha* = P0 / |p_i|^2: with user i cancelling, the full budget is always
// optimal and nobody else sees the beam.
RiderCandidate solve_rider_sic(arma::uword beam_index, const ChannelSet& channels,
                               const Precoder& precoder, const RateContext& ctx,
                               const PowerBudget& budget);

// Best of the 2K candidates (K beams x 2 modes). Ties prefer NoSic, then
// the lowest beam index, so results are reproducible.
BeamSolution best_rider(const ChannelSet& channels, const Precoder& precoder,
                        const RateContext& ctx, const PowerBudget& budget);

} // namespace beamkit

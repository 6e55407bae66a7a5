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

#include "beamkit/strategy_one.hpp"

#include <cmath>

namespace beamkit {

namespace {

arma::cx_vec rider_beam(const Precoder& precoder, arma::uword i, double alpha) {
    return std::sqrt(alpha) * precoder.columns.col(i);
}

} // namespace

RiderCandidate solve_rider_no_sic(arma::uword beam_index, const ChannelSet& channels,
                                  const Precoder& precoder, const RateContext& ctx,
                                  const PowerBudget& budget) {
    RiderCandidate cand;
    cand.beam_index = beam_index;
    cand.mode = RiderMode::NoSic;
    cand.alpha = std::min(budget.p0_w / precoder.beam_power(beam_index),
                          ctx.tau_w(beam_index) / precoder.effective_gain(beam_index));
    cand.rate_bpcu = rate_no_sic(rider_beam(precoder, beam_index, cand.alpha), channels, ctx);
    return cand;
}

RiderCandidate solve_rider_sic(arma::uword beam_index, const ChannelSet& channels,
                               const Precoder& precoder, const RateContext& ctx,
                               const PowerBudget& budget) {
    RiderCandidate cand;
    cand.beam_index = beam_index;
    cand.mode = RiderMode::SicAtOwner;
    cand.alpha = budget.p0_w / precoder.beam_power(beam_index);
    cand.rate_bpcu =
        rate_partial_sic(rider_beam(precoder, beam_index, cand.alpha),
                         SicSet::of(channels.n_users(), {beam_index}), channels, ctx);
    return cand;
}

BeamSolution best_rider(const ChannelSet& channels, const Precoder& precoder,
                        const RateContext& ctx, const PowerBudget& budget) {
    const arma::uword k = channels.n_users();

    RiderCandidate best;
    bool have = false;
    // NoSic candidates first, then SicAtOwner, each in index order; strict
    // comparison keeps the first of any tie.
    for (RiderMode mode : {RiderMode::NoSic, RiderMode::SicAtOwner}) {
        for (arma::uword i = 0; i < k; ++i) {
            const RiderCandidate cand =
                mode == RiderMode::NoSic
                    ? solve_rider_no_sic(i, channels, precoder, ctx, budget)
                    : solve_rider_sic(i, channels, precoder, ctx, budget);
            if (!have || cand.rate_bpcu > best.rate_bpcu) {
                best = cand;
                have = true;
            }
        }
    }

    BeamSolution sol;
    sol.beam = rider_beam(precoder, best.beam_index, best.alpha);
    sol.sic_set = best.mode == RiderMode::SicAtOwner
                      ? SicSet::of(k, {best.beam_index})
                      : SicSet::none(k);
    sol.rate_bpcu = best.rate_bpcu;
    sol.strategy = Strategy::RideExisting;
    sol.rider_index = best.beam_index;
    sol.feasible = true;
    sol.legacy_infeasible = ctx.legacy_infeasible();
    return sol;
}

} // namespace beamkit

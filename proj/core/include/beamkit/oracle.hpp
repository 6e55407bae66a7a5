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

#include <cstdint>

#include "beamkit/model.hpp"
#include "beamkit/precoding.hpp"
#include "beamkit/rates.hpp"

namespace beamkit {

// Brute-force maximizers, independent of every solver path, used to
// validate the relaxation pipeline at desk scale.

struct GridResolution {
    arma::uword n_radial = 200; // points per amplitude axis, endpoints included
    arma::uword n_phase = 180;  // points on [0, 2pi)
};

struct OracleReport {
    arma::cx_vec best_beam;
    double best_rate_bpcu = 0.0;
    arma::uword evaluations = 0;
    double grid_dr = 0.0;   // amplitude spacing actually used
    double grid_dphi = 0.0; // phase spacing actually used
};

// Exhaustive search for N = 2 over w = (r1, r2 e^{i phi}), the global phase
// fixed by keeping the first entry real nonnegative (rates are phase
// invariant). Evaluates the exact rate of the given SIC set subject to the
// exact caps; refining a grid never loses the points of the coarser one
// (amplitudes: n -> 2n-1; phases: n -> 2n). Throws std::invalid_argument
// unless N == 2. With every cap sliced to zero the report degrades to the
// zero beam.
OracleReport grid_oracle_2d(const SicSet& sic, const ChannelSet& channels,
                            const Precoder& precoder, const RateContext& ctx,
                            const PowerBudget& budget, const GridResolution& res = {});

// Random feasible directions scaled to their binding cap: a lower bound on
// the optimum for any N, mainly a sanity check above the 2-D envelope.
OracleReport sampling_oracle(const SicSet& sic, const ChannelSet& channels,
                             const Precoder& precoder, const RateContext& ctx,
                             const PowerBudget& budget, arma::uword samples,
                             std::uint64_t seed);

} // namespace beamkit

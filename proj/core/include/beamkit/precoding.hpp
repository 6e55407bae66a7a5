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

#include "beamkit/model.hpp"

namespace beamkit {

// Zero-forcing precoder P = c H (H^H H)^{-1} for the legacy users, with c
// chosen so the columns together carry exactly the legacy power budget:
// c^2 = P_sdma / tr(H (H^H H)^{-2} H^H). By construction H^H P = c I, so
// beam j causes no interference at user k for k != j and every user sees
// the real positive gain c on its own beam.
struct Precoder {
    arma::cx_mat columns;     // N x K, column k serves user k
    double norm_const = 0.0;  // c
    arma::vec beam_power;     // per-beam |p_k|^2
    arma::vec effective_gain; // |h_k^H p_k|^2 (= c^2 for every k)
};

// Builds the precoder through an orthogonal-triangular factorization of H
// rather than forming (H^H H)^{-1} explicitly; random drops can place
// channels nearly collinear and the Gram matrix squares the conditioning.
// Throws std::runtime_error when cond(H^H H) exceeds 1e12.
Precoder zf_precoder(const ChannelSet& channels, double p_sdma_w);

} // namespace beamkit

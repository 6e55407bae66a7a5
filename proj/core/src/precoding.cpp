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

#include "beamkit/precoding.hpp"

namespace beamkit {

Precoder zf_precoder(const ChannelSet& channels, double p_sdma_w) {
    if (!(p_sdma_w > 0.0))
        throw std::invalid_argument("zf_precoder: legacy power must be positive");

    const arma::cx_mat& h = channels.primary;
    const arma::uword k = h.n_cols;
    if (k == 0 || k > h.n_rows)
        throw std::invalid_argument("zf_precoder: need 1 <= K <= N");

    // Economy QR: H = Q R. Then H (H^H H)^{-1} = Q R^{-H}, and
    // cond(H^H H) = cond(R)^2.
    arma::cx_mat q, r;
    if (!arma::qr_econ(q, r, h))
        throw std::runtime_error("zf_precoder: QR factorization failed");

    const arma::vec sv = arma::svd(r);
    if (sv(sv.n_elem - 1) <= 0.0 ||
        (sv(0) / sv(sv.n_elem - 1)) * (sv(0) / sv(sv.n_elem - 1)) > 1e12)
        throw std::runtime_error(
            "zf_precoder: channel matrix is singular or too ill-conditioned for zero-forcing");

    // Unnormalized precoder H (H^H H)^{-1} = Q R^{-H}, then scale so
    // tr(P^H P) = P_sdma.
    const arma::cx_mat base = arma::solve(arma::trimatu(r), q.t()).t();
    const double base_energy = std::pow(arma::norm(base, "fro"), 2);
    const double c = std::sqrt(p_sdma_w / base_energy);

    Precoder p;
    p.columns = c * base;
    p.norm_const = c;
    p.beam_power.set_size(k);
    p.effective_gain.set_size(k);
    for (arma::uword j = 0; j < k; ++j) {
        p.beam_power(j) = std::pow(arma::norm(p.columns.col(j)), 2);
        p.effective_gain(j) = std::norm(arma::cdot(h.col(j), p.columns.col(j)));
    }
    return p;
}

} // namespace beamkit

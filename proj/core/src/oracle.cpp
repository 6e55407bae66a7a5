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

#include "beamkit/oracle.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "beamkit/rng.hpp"

namespace beamkit {

namespace {

using cxd = std::complex<double>;

} // namespace

OracleReport grid_oracle_2d(const SicSet& sic, const ChannelSet& channels,
                            const Precoder& precoder, const RateContext& ctx,
                            const PowerBudget& budget, const GridResolution& res) {
    (void)precoder;
    if (channels.n_antennas() != 2)
        throw std::invalid_argument("grid_oracle_2d: exhaustive search is limited to N = 2");
    if (res.n_radial < 2 || res.n_phase < 1)
        throw std::invalid_argument("grid_oracle_2d: resolution too coarse");

    const arma::uword k = channels.n_users();
    const double p0 = budget.p0_w;
    const double sqrt_p0 = std::sqrt(p0);

    const std::vector<arma::uword> sic_members = sic.members();
    const std::vector<arma::uword> cap_users = sic.is_all() ? std::vector<arma::uword>{}
                                                            : sic.complement();

    // channel rows: secondary first, then every primary user
    const cxd g1 = std::conj(channels.secondary(0));
    const cxd g2 = std::conj(channels.secondary(1));
    std::vector<cxd> h1(k), h2(k);
    for (arma::uword u = 0; u < k; ++u) {
        h1[u] = std::conj(channels.primary(0, u));
        h2[u] = std::conj(channels.primary(1, u));
    }

    const double a0 = ctx.interference_secondary_w + ctx.noise_power_w;
    std::vector<double> a_sic;
    for (arma::uword i : sic_members)
        a_sic.push_back(ctx.interference_primary_w(i) + ctx.noise_power_w);

    const double dr = sqrt_p0 / double(res.n_radial - 1);
    const double dphi = 2.0 * arma::datum::pi / double(res.n_phase);

    // second components r2 e^{i phi} premultiplied by each channel's
    // conjugate second entry
    const arma::uword n2 = res.n_radial * res.n_phase;
    std::vector<cxd> tg(n2);
    std::vector<std::vector<cxd>> th(k, std::vector<cxd>(n2));
    std::vector<double> r2sq(n2);
    {
        arma::uword idx = 0;
        for (arma::uword i2 = 0; i2 < res.n_radial; ++i2) {
            const double r2 = double(i2) * dr;
            for (arma::uword ip = 0; ip < res.n_phase; ++ip, ++idx) {
                const cxd e = std::polar(r2, double(ip) * dphi);
                tg[idx] = g2 * e;
                for (arma::uword u = 0; u < k; ++u)
                    th[u][idx] = h2[u] * e;
                r2sq[idx] = r2 * r2;
            }
        }
    }

    OracleReport rep;
    rep.grid_dr = dr;
    rep.grid_dphi = dphi;
    rep.best_beam = arma::zeros<arma::cx_vec>(2);
    double best_ratio = -1.0;
    double best_r1 = 0.0;
    arma::uword best_idx2 = 0;
    arma::uword evals = 0;

    std::vector<double> leak(k);
    for (arma::uword i1 = 0; i1 < res.n_radial; ++i1) {
        const double r1 = double(i1) * dr;
        const double r1sq = r1 * r1;
        const cxd gg = g1 * r1;
        for (arma::uword idx = 0; idx < n2; ++idx) {
            ++evals;
            if (r1sq + r2sq[idx] > p0 * (1.0 + 1e-12))
                continue;
            bool feasible = true;
            for (arma::uword u = 0; u < k; ++u)
                leak[u] = std::norm(h1[u] * r1 + th[u][idx]);
            for (arma::uword j : cap_users)
                if (leak[j] > ctx.tau_w(j) * (1.0 + 1e-9) + 1e-15 * ctx.noise_power_w) {
                    feasible = false;
                    break;
                }
            if (!feasible)
                continue;

            double ratio = std::norm(gg + tg[idx]) / a0;
            for (std::size_t s = 0; s < sic_members.size(); ++s)
                ratio = std::min(ratio, leak[sic_members[s]] / a_sic[s]);
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best_r1 = r1;
                best_idx2 = idx;
            }
        }
    }

    rep.evaluations = evals;
    if (best_ratio >= 0.0) {
        const arma::uword i2 = best_idx2 / res.n_phase;
        const arma::uword ip = best_idx2 % res.n_phase;
        rep.best_beam(0) = best_r1;
        rep.best_beam(1) = std::polar(double(i2) * dr, double(ip) * dphi);
        rep.best_rate_bpcu = std::log2(1.0 + best_ratio);
    }
    return rep;
}

OracleReport sampling_oracle(const SicSet& sic, const ChannelSet& channels,
                             const Precoder& precoder, const RateContext& ctx,
                             const PowerBudget& budget, arma::uword samples,
                             std::uint64_t seed) {
    (void)precoder;
    const arma::uword n = channels.n_antennas();
    const std::vector<arma::uword> cap_users = sic.is_all() ? std::vector<arma::uword>{}
                                                            : sic.complement();
    Rng rng(seed);

    OracleReport rep;
    rep.best_beam = arma::zeros<arma::cx_vec>(n);
    double best_rate = -1.0;
    for (arma::uword s = 0; s < samples; ++s) {
        arma::cx_vec xi(n);
        for (arma::uword i = 0; i < n; ++i)
            xi(i) = rng.complex_normal();

        // scale the direction to its binding cap
        double beta2 = budget.p0_w / std::pow(arma::norm(xi), 2);
        for (arma::uword j : cap_users) {
            const double val = std::norm(arma::cdot(channels.primary.col(j), xi));
            if (val > 1e-300)
                beta2 = std::min(beta2, ctx.tau_w(j) / val);
        }
        const arma::cx_vec w = std::sqrt(std::max(beta2, 0.0)) * xi;
        const double rate = sic.empty()    ? rate_no_sic(w, channels, ctx)
                            : sic.is_all() ? rate_full_sic(w, channels, ctx)
                                           : rate_partial_sic(w, sic, channels, ctx);
        ++rep.evaluations;
        if (rate > best_rate) {
            best_rate = rate;
            rep.best_beam = w;
        }
    }
    rep.best_rate_bpcu = std::max(best_rate, 0.0);
    return rep;
}

} // namespace beamkit

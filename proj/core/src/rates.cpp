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

#include "beamkit/rates.hpp"

#include <cmath>

namespace beamkit {

namespace {

inline double log2_1p(double x) { return std::log2(1.0 + x); }

} // namespace

RateContext build_context(const ChannelSet& channels, const Precoder& precoder,
                          const QosSpec& qos) {
    const arma::uword k = channels.n_users();
    if (precoder.columns.n_cols != k || qos.targets_bpcu.n_elem != k)
        throw std::invalid_argument("build_context: precoder/QoS size mismatch");

    RateContext ctx;
    ctx.noise_power_w = channels.noise_power_w;

    const arma::cx_rowvec g_row = channels.secondary.t() * precoder.columns;
    ctx.interference_secondary_w = std::pow(arma::norm(g_row), 2);

    ctx.interference_primary_w.set_size(k);
    ctx.tau_w.set_size(k);
    for (arma::uword i = 0; i < k; ++i) {
        const arma::cx_rowvec h_row = channels.primary.col(i).t() * precoder.columns;
        ctx.interference_primary_w(i) = std::pow(arma::norm(h_row), 2);
        const double snr_floor = std::exp2(qos.targets_bpcu(i)) - 1.0;
        ctx.tau_w(i) =
            std::max(0.0, precoder.effective_gain(i) / snr_floor - channels.noise_power_w);
    }
    return ctx;
}

double rate_no_sic(const arma::cx_vec& w, const ChannelSet& channels,
                   const RateContext& ctx) {
    const double signal = std::norm(arma::cdot(channels.secondary, w));
    return log2_1p(signal / (ctx.interference_secondary_w + ctx.noise_power_w));
}

double rate_partial_sic(const arma::cx_vec& w, const SicSet& sic,
                        const ChannelSet& channels, const RateContext& ctx) {
    if (sic.empty())
        throw std::invalid_argument("rate_partial_sic: SIC set must be nonempty");

    double rate = rate_no_sic(w, channels, ctx);
    for (arma::uword i : sic.members()) {
        const double signal = std::norm(arma::cdot(channels.primary.col(i), w));
        rate = std::min(rate,
                        log2_1p(signal / (ctx.interference_primary_w(i) + ctx.noise_power_w)));
    }
    return rate;
}

double rate_full_sic(const arma::cx_vec& w, const ChannelSet& channels,
                     const RateContext& ctx) {
    return rate_partial_sic(w, SicSet::all(channels.n_users()), channels, ctx);
}

std::vector<bool> qos_satisfied(const arma::cx_vec& w, const ChannelSet& channels,
                                const RateContext& ctx) {
    const arma::uword k = channels.n_users();
    std::vector<bool> ok(k);
    for (arma::uword i = 0; i < k; ++i) {
        const double leak = std::norm(arma::cdot(channels.primary.col(i), w));
        const double slack = 1e-9 * std::max(ctx.tau_w(i), ctx.noise_power_w);
        ok[i] = leak <= ctx.tau_w(i) + slack;
    }
    return ok;
}

} // namespace beamkit

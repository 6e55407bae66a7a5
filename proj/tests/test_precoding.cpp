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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "beamkit/precoding.hpp"
#include "fixtures.hpp"

using namespace beamkit;

namespace {

ChannelSet random_channels(arma::uword n, arma::uword k, std::uint64_t seed) {
    Rng rng(seed);
    ChannelSet ch;
    ch.primary.set_size(n, k);
    for (auto& v : ch.primary)
        v = rng.complex_normal();
    ch.secondary.set_size(n);
    for (auto& v : ch.secondary)
        v = rng.complex_normal();
    ch.noise_power_w = 1e-4;
    return ch;
}

} // namespace

TEST_CASE("orthonormal channels give the scaled identity precoder") {
    const Precoder p = zf_precoder(testing::ortho2().channels, 1.0);
    CHECK(p.norm_const == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(p.beam_power(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.beam_power(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(arma::approx_equal(p.columns,
                             arma::cx_mat((1.0 / std::sqrt(2.0)) * arma::eye(2, 2),
                                          arma::zeros(2, 2)),
                             "absdiff", 1e-12));
}

TEST_CASE("duplicated channel column is rejected as singular") {
    ChannelSet ch = random_channels(3, 2, 11);
    ch.primary.col(1) = ch.primary.col(0);
    CHECK_THROWS_AS(zf_precoder(ch, 1.0), std::runtime_error);
}

TEST_CASE("zero-forcing identities on a random 4x3 draw") {
    const ChannelSet ch = random_channels(4, 3, 42);
    const Precoder p = zf_precoder(ch, 1.0);

    // independent dense route through the normal equations
    const arma::cx_mat gram = ch.primary.t() * ch.primary;
    const arma::cx_mat base = ch.primary * arma::inv(gram);
    const double c_ref = std::sqrt(1.0 / std::real(arma::trace(base * base.t())));
    CHECK(p.norm_const == doctest::Approx(c_ref).epsilon(1e-10));
    CHECK(arma::approx_equal(p.columns, arma::cx_mat(c_ref * base), "absdiff", 1e-9));

    // H^H P = c I
    const arma::cx_mat cross = ch.primary.t() * p.columns;
    for (arma::uword i = 0; i < 3; ++i)
        for (arma::uword j = 0; j < 3; ++j) {
            if (i == j)
                CHECK(std::abs(cross(i, j) - p.norm_const) < 1e-9 * p.norm_const);
            else
                CHECK(std::abs(cross(i, j)) < 1e-9 * p.norm_const);
        }

    CHECK(std::pow(arma::norm(p.columns, "fro"), 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("the precoder is invariant under channel rescaling") {
    const ChannelSet ch = random_channels(5, 4, 77);
    ChannelSet scaled = ch;
    scaled.primary *= 3.7;

    const Precoder a = zf_precoder(ch, 2.0);
    const Precoder b = zf_precoder(scaled, 2.0);
    // column directions and beam powers survive H -> beta H; c rescales
    CHECK(arma::approx_equal(a.columns, b.columns, "absdiff", 1e-9));
    CHECK(arma::approx_equal(a.beam_power, b.beam_power, "absdiff", 1e-9));
    CHECK(b.norm_const == doctest::Approx(3.7 * a.norm_const).epsilon(1e-9));
}

TEST_CASE("power budget and interference bounds hold over random draws") {
    Rng seeds(12345);
    for (int rep = 0; rep < 200; ++rep) {
        const arma::uword n = 1 + arma::uword(seeds.next_u64() % 8);
        const arma::uword k = 1 + arma::uword(seeds.next_u64() % n);
        const double p_sdma = 0.25 + 2.0 * seeds.uniform();
        const ChannelSet ch = random_channels(n, k, seeds.next_u64());
        const Precoder p = zf_precoder(ch, p_sdma);

        CHECK(std::pow(arma::norm(p.columns, "fro"), 2) ==
              doctest::Approx(p_sdma).epsilon(1e-9));
        for (arma::uword u = 0; u < k; ++u)
            for (arma::uword j = 0; j < k; ++j) {
                if (u == j)
                    continue;
                const double cross =
                    std::abs(arma::cdot(ch.primary.col(u), p.columns.col(j)));
                CHECK(cross <= 1e-9 * arma::norm(ch.primary.col(u)) *
                                   arma::norm(p.columns.col(j)));
            }
    }
}

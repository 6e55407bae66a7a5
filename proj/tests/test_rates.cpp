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

#include "fixtures.hpp"

using namespace beamkit;
using beamkit::testing::build;

TEST_CASE("interference headroom on the workhorse scenario") {
    const auto b = build(testing::ortho2());
    CHECK(b.ctx.tau_w(0) == doctest::Approx(0.4999).epsilon(1e-12));
    CHECK(b.ctx.tau_w(1) == doctest::Approx(0.4999).epsilon(1e-12));
    CHECK(b.ctx.interference_secondary_w == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.ctx.interference_primary_w(0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(!b.ctx.legacy_infeasible());
}

TEST_CASE("headroom clamps at zero when the legacy design cannot deliver") {
    Scenario s = testing::ortho2();
    s.channels.noise_power_w = 0.6; // above the 0.5 effective gain
    const auto b = build(s);
    CHECK(b.ctx.tau_w(0) == 0.0);
    CHECK(b.ctx.legacy_infeasible());
}

TEST_CASE("secondary interference with the channel aligned to one beam") {
    Scenario s = testing::ortho2_theta(arma::datum::pi / 2); // g = e1
    const auto b = build(s);
    CHECK(b.ctx.interference_secondary_w == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("no-SIC rate: zero beam, frozen value, noise monotonicity") {
    const auto b = build(testing::ortho2());
    const arma::cx_vec zero(2, arma::fill::zeros);
    CHECK(rate_no_sic(zero, b.scenario.channels, b.ctx) == 0.0);

    // alpha* = min{2, 0.9998} on beam 1: |g^H w|^2 = 0.24995
    const arma::cx_vec w = std::sqrt(0.9998) * b.precoder.columns.col(0);
    const double rate = rate_no_sic(w, b.scenario.channels, b.ctx);
    CHECK(rate == doctest::Approx(std::log2(1.0 + 0.24995 / 0.5001)).epsilon(1e-12));
    CHECK(rate == doctest::Approx(0.5848).epsilon(2e-4));

    Scenario noisier = b.scenario;
    noisier.channels.noise_power_w *= 2.0;
    const auto b2 = build(noisier);
    CHECK(rate_no_sic(w, b2.scenario.channels, b2.ctx) < rate);
}

TEST_CASE("partial-SIC rate: frozen value and the empty-set contract") {
    const auto b = build(testing::ortho2());
    const arma::cx_vec e1{arma::cx_double(1.0, 0.0), arma::cx_double(0.0, 0.0)};

    const double rate = rate_partial_sic(e1, SicSet::of(2, {0}), b.scenario.channels, b.ctx);
    CHECK(rate == doctest::Approx(std::log2(1.0 + 0.5 / 0.5001)).epsilon(1e-12));
    CHECK(rate == doctest::Approx(0.99986).epsilon(1e-4));

    CHECK_THROWS_AS(rate_partial_sic(e1, SicSet::none(2), b.scenario.channels, b.ctx),
                    std::invalid_argument);
}

TEST_CASE("full-SIC rate at the balanced beam") {
    const auto b = build(testing::ortho2());
    const arma::cx_vec w{arma::cx_double(std::sqrt(0.5), 0.0),
                         arma::cx_double(std::sqrt(0.5), 0.0)};
    const double rate = rate_full_sic(w, b.scenario.channels, b.ctx);
    CHECK(rate == doctest::Approx(std::log2(1.0 + 0.5 / 0.5001)).epsilon(1e-12));
    CHECK(rate == rate_partial_sic(w, SicSet::all(2), b.scenario.channels, b.ctx));
}

TEST_CASE("rate ordering: full <= partial <= none, for random beams and sets") {
    Rng rng(99);
    for (int rep = 0; rep < 100; ++rep) {
        const Scenario s = testing::random_deployment(3, 1000, rep);
        const auto b = build(s);
        arma::cx_vec w(3);
        for (auto& v : w)
            v = rng.complex_normal();
        w *= std::sqrt(s.power.p0_w) / arma::norm(w);

        const double none = rate_no_sic(w, s.channels, b.ctx);
        const double full = rate_full_sic(w, s.channels, b.ctx);
        const std::uint32_t mask = 1 + arma::uword(rng.next_u64() % 6); // proper nonempty
        const double part =
            rate_partial_sic(w, SicSet(3, mask), s.channels, b.ctx);
        CHECK(full <= part + 1e-12);
        CHECK(part <= none + 1e-12);
    }
}

TEST_CASE("rates are invariant under a global phase rotation") {
    const Scenario s = testing::random_deployment(2, 31337, 5);
    const auto b = build(s);
    Rng rng(4);
    arma::cx_vec w(2);
    for (auto& v : w)
        v = rng.complex_normal();
    const arma::cx_vec w_rot = std::polar(1.0, 1.234) * w;
    CHECK(rate_no_sic(w, s.channels, b.ctx) ==
          doctest::Approx(rate_no_sic(w_rot, s.channels, b.ctx)).epsilon(1e-12));
    CHECK(rate_full_sic(w, s.channels, b.ctx) ==
          doctest::Approx(rate_full_sic(w_rot, s.channels, b.ctx)).epsilon(1e-12));
}

TEST_CASE("interference caps decide the rate-floor inequality, both ways") {
    // cap formulation vs. the rate formulation it encodes
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const Scenario s = testing::random_deployment(2, 2024, trial);
        const auto b = build(s);
        Rng rng(trial);
        arma::cx_vec w(2);
        for (auto& v : w)
            v = rng.complex_normal();
        w *= std::sqrt(s.power.p0_w) * rng.uniform() / arma::norm(w);

        const auto ok = qos_satisfied(w, s.channels, b.ctx);
        for (arma::uword u = 0; u < 2; ++u) {
            const double leak = std::norm(arma::cdot(s.channels.primary.col(u), w));
            const double achieved = std::log2(
                1.0 + b.precoder.effective_gain(u) / (leak + s.channels.noise_power_w));
            const double target = s.qos.targets_bpcu(u);
            if (achieved >= target * (1.0 + 1e-9))
                CHECK(ok[u]);
            if (achieved < target * (1.0 - 1e-9))
                CHECK(!ok[u]);
        }
    }
}

TEST_CASE("cap check edge cases") {
    const auto b = build(testing::ortho2());
    const arma::cx_vec zero(2, arma::fill::zeros);
    const auto all_ok = qos_satisfied(zero, b.scenario.channels, b.ctx);
    CHECK(all_ok[0]);
    CHECK(all_ok[1]);

    // 0.5041 leaked power against the 0.4999 cap
    const arma::cx_vec w{arma::cx_double(0.71, 0.0), arma::cx_double(0.0, 0.0)};
    const auto ok = qos_satisfied(w, b.scenario.channels, b.ctx);
    CHECK(!ok[0]);
    CHECK(ok[1]);

    // a clamped cap is met exactly at the boundary by a silent beam
    Scenario s = testing::ortho2();
    s.channels.noise_power_w = 0.6;
    const auto b2 = build(s);
    const auto boundary = qos_satisfied(zero, s.channels, b2.ctx);
    CHECK(boundary[0]);
}

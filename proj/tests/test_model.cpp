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

#include <sstream>

#include "beamkit/scenario_io.hpp"
#include "beamkit/units.hpp"
#include "fixtures.hpp"

using namespace beamkit;

TEST_CASE("dBm conversion hits the unit anchors") {
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(0.001).epsilon(1e-14));
    // 10^((-94-30)/10), evaluated independently
    CHECK(dbm_to_watts(-94.0) == doctest::Approx(3.9810717055349695e-13).epsilon(1e-12));
}

TEST_CASE("dBm round trip is exact to 1e-12 relative") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double dbm = -120.0 + 170.0 * rng.uniform();
        CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
    }
}

TEST_CASE("validate accepts the workhorse scenario") {
    CHECK_NOTHROW(validate(testing::ortho2()));
}

TEST_CASE("validate names the violated invariant") {
    Scenario s = testing::ortho2();

    SUBCASE("more users than antennas") {
        s.channels.primary = arma::ones<arma::cx_mat>(2, 3);
        s.qos.targets_bpcu = {1.0, 1.0, 1.0};
        CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("K exceeds N"),
                             std::invalid_argument);
    }
    SUBCASE("nonpositive noise") {
        s.channels.noise_power_w = 0.0;
        CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("noise power must be positive"),
                             std::invalid_argument);
    }
    SUBCASE("nonfinite channel entry") {
        s.channels.secondary(0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("nonfinite"),
                             std::invalid_argument);
    }
    SUBCASE("secondary channel length mismatch") {
        s.channels.secondary = arma::cx_vec(3, arma::fill::ones);
        CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("dimension mismatch"),
                             std::invalid_argument);
    }
    SUBCASE("nonpositive budget") {
        s.power.p0_w = -1.0;
        CHECK_THROWS_AS(validate(s), std::invalid_argument);
    }
    SUBCASE("nonpositive rate target") {
        s.qos.targets_bpcu(1) = 0.0;
        CHECK_THROWS_AS(validate(s), std::invalid_argument);
    }
}

TEST_CASE("SicSet membership and complement") {
    const SicSet s = SicSet::of(4, {0, 2});
    CHECK(s.size() == 2);
    CHECK(s.contains(0));
    CHECK(!s.contains(1));
    CHECK(s.complement() == std::vector<arma::uword>{1, 3});
    CHECK(SicSet::all(3).is_all());
    CHECK(SicSet::none(3).empty());
    CHECK_THROWS_AS(SicSet::of(2, {2}), std::invalid_argument);
}

TEST_CASE("scenario JSON round trip") {
    Scenario s = testing::ortho2();
    s.channels.secondary(0) = {0.3, -0.4};

    std::stringstream buf;
    write_scenario(s, buf);
    const Scenario back = parse_scenario(buf);

    CHECK(arma::approx_equal(back.channels.primary, s.channels.primary, "absdiff", 1e-12));
    CHECK(arma::approx_equal(back.channels.secondary, s.channels.secondary, "absdiff", 1e-12));
    CHECK(back.channels.noise_power_w == doctest::Approx(s.channels.noise_power_w));
    CHECK(back.power.p0_w == doctest::Approx(s.power.p0_w));
    CHECK(back.power.p_sdma_w == doctest::Approx(s.power.p_sdma_w));
}

TEST_CASE("scenario parser rejects malformed input") {
    std::stringstream not_json("{ nope");
    CHECK_THROWS_AS(parse_scenario(not_json), std::invalid_argument);

    std::stringstream missing(R"({"n":2,"k":2})");
    CHECK_THROWS_WITH_AS(parse_scenario(missing), doctest::Contains("missing field"),
                         std::invalid_argument);

    // complex entries must be {re, im}
    std::stringstream bad_complex(
        R"({"n":1,"k":1,"h":[[1.0]],"g":[{"re":1,"im":0}],
            "sigma2_dbm":-94,"p_sdma_dbm":30,"p0_dbm":30,"rates_bpcu":[1]})");
    CHECK_THROWS_AS(parse_scenario(bad_complex), std::invalid_argument);

    // invariants are enforced on load: K > N
    std::stringstream k_exceeds(
        R"({"n":1,"k":2,
            "h":[[{"re":1,"im":0}],[{"re":0,"im":1}]],
            "g":[{"re":1,"im":0}],
            "sigma2_dbm":-94,"p_sdma_dbm":30,"p0_dbm":30,"rates_bpcu":[1,1]})");
    CHECK_THROWS_WITH_AS(parse_scenario(k_exceeds), doctest::Contains("K exceeds N"),
                         std::invalid_argument);
}

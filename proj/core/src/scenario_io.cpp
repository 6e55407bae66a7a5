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

#include "beamkit/scenario_io.hpp"

#include <fstream>
#include <json.hpp>

#include "beamkit/units.hpp"

namespace beamkit {

using nlohmann::json;

namespace {

std::complex<double> complex_from(const json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("scenario file: complex entries must be {re, im} objects");
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

json complex_to(std::complex<double> v) {
    return json{{"re", v.real()}, {"im", v.imag()}};
}

} // namespace

Scenario parse_scenario(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario file: not valid JSON: ") + e.what());
    }

    for (const char* key : {"n", "k", "h", "g", "sigma2_dbm", "p_sdma_dbm", "p0_dbm", "rates_bpcu"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("scenario file: missing field '") + key + "'");

    const arma::uword n = j.at("n").get<arma::uword>();
    const arma::uword k = j.at("k").get<arma::uword>();

    const json& h = j.at("h");
    if (!h.is_array() || h.size() != k)
        throw std::invalid_argument("scenario file: 'h' must hold one channel vector per user");

    Scenario s;
    s.channels.primary.set_size(n, k);
    for (arma::uword u = 0; u < k; ++u) {
        const json& row = h.at(u);
        if (!row.is_array() || row.size() != n)
            throw std::invalid_argument("scenario file: channel vector length differs from 'n'");
        for (arma::uword a = 0; a < n; ++a)
            s.channels.primary(a, u) = complex_from(row.at(a));
    }

    const json& g = j.at("g");
    if (!g.is_array() || g.size() != n)
        throw std::invalid_argument("scenario file: 'g' length differs from 'n'");
    s.channels.secondary.set_size(n);
    for (arma::uword a = 0; a < n; ++a)
        s.channels.secondary(a) = complex_from(g.at(a));

    s.channels.noise_power_w = dbm_to_watts(j.at("sigma2_dbm").get<double>());
    s.power.p_sdma_w = dbm_to_watts(j.at("p_sdma_dbm").get<double>());
    s.power.p0_w = dbm_to_watts(j.at("p0_dbm").get<double>());

    const json& rates = j.at("rates_bpcu");
    if (!rates.is_array() || rates.size() != k)
        throw std::invalid_argument("scenario file: 'rates_bpcu' must hold one target per user");
    s.qos.targets_bpcu.set_size(k);
    for (arma::uword u = 0; u < k; ++u)
        s.qos.targets_bpcu(u) = rates.at(u).get<double>();

    validate(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("scenario file: cannot open '" + path + "'");
    return parse_scenario(in);
}

void write_scenario(const Scenario& s, std::ostream& out) {
    const arma::uword n = s.channels.n_antennas();
    const arma::uword k = s.channels.n_users();

    json h = json::array();
    for (arma::uword u = 0; u < k; ++u) {
        json row = json::array();
        for (arma::uword a = 0; a < n; ++a)
            row.push_back(complex_to(s.channels.primary(a, u)));
        h.push_back(std::move(row));
    }
    json g = json::array();
    for (arma::uword a = 0; a < n; ++a)
        g.push_back(complex_to(s.channels.secondary(a)));

    json j{
        {"n", n},
        {"k", k},
        {"h", std::move(h)},
        {"g", std::move(g)},
        {"sigma2_dbm", watts_to_dbm(s.channels.noise_power_w)},
        {"p_sdma_dbm", watts_to_dbm(s.power.p_sdma_w)},
        {"p0_dbm", watts_to_dbm(s.power.p0_w)},
        {"rates_bpcu", std::vector<double>(s.qos.targets_bpcu.begin(), s.qos.targets_bpcu.end())},
    };
    out << j.dump(2) << '\n';
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("scenario file: cannot write '" + path + "'");
    write_scenario(s, out);
}

} // namespace beamkit

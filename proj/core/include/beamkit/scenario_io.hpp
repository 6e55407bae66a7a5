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

#include <iosfwd>
#include <string>

#include "beamkit/model.hpp"

namespace beamkit {

// Scenario file schema (JSON):
//   {
//     "n": 2, "k": 2,
//     "h": [[{"re":1,"im":0},{"re":0,"im":0}], ...],   // K rows of N entries
//     "g": [{"re":0.707,"im":0}, ...],                 // N entries
//     "sigma2_dbm": -94.0,
//     "p_sdma_dbm": 30.0,
//     "p0_dbm": 30.0,
//     "rates_bpcu": [1.0, 1.0]
//   }
// Complex numbers are always {re, im} pairs. Powers cross this boundary in
// dBm and are converted to watts on load; everything after runs linear.

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::istream& in);

void save_scenario(const Scenario& scenario, const std::string& path);
void write_scenario(const Scenario& scenario, std::ostream& out);

} // namespace beamkit

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
#include "beamkit/sdp.hpp"

namespace beamkit {

// Diagnosis of a relaxation solution's rank structure from its dual
// multipliers. With M = G-part + sum of (>=-row duals * their matrices)
// minus (<=-row duals * theirs), the dual matrix is cap_dual * I - M, and
// comparing M's top two eigenvalues against the trace-cap dual decides
// whether the solution is provably rank-one:
//   - top eigenvalue equal to the cap dual, second strictly below it:
//     the dual matrix has a one-dimensional null space, so W is rank-one;
//   - top eigenvalue above/below the cap dual: impossible at an exact
//     optimum (it would make the dual matrix indefinite, or force W = 0);
//     at solver tolerance these read as Inconclusive;
//   - repeated top eigenvalue: the rank argument collapses; W may carry
//     rank two and randomized extraction takes over.
enum class CertClass {
    ProvablyRankOne,
    DegenerateOrthogonal,   // repeated top eigenvalue, orthogonal channel pair
    DegenerateRealChannels, // repeated top eigenvalue, all-real channels
    RepeatedEigenvalue,     // repeated top eigenvalue, generic instance
    Inconclusive,
};

struct Certificate {
    arma::uword rank_estimate = 0; // numerical rank of the solved W
    arma::vec dual_matrix_eigs;    // eigenvalues of M, sorted descending
    double cap_dual = 0.0;
    CertClass classification = CertClass::Inconclusive;
    double eigen_gap = 0.0; // top minus second eigenvalue of M
};

struct DegeneracyFlags {
    bool orthogonal_pair = false;
    bool real_valued = false;
};

// Structural channel checks feeding the classification above. An
// orthogonal pair or fully real channels make the dual equations solvable
// with a vanishing dual matrix, the regimes where rank-one can be lost.
DegeneracyFlags detect_degeneracy(const ChannelSet& channels);

Certificate certify(const SdpInstance& instance, const SdpResult& result,
                    const DegeneracyFlags& flags = {});

const char* to_string(CertClass c);

} // namespace beamkit

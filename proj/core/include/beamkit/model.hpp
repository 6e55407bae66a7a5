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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace beamkit {

// Channel state for one scenario: K single-antenna primary users and one
// secondary user behind an N-antenna transmitter. Entries are linear
// amplitude gains; channels are stored unnormalized.
//
// All types in this header are plain immutable values once built; they can
// be copied and shared across threads freely.
struct ChannelSet {
    arma::cx_mat primary;  // N x K, column k is primary user k's channel
    arma::cx_vec secondary; // length N, the secondary user's channel
    double noise_power_w = 0.0;

    arma::uword n_antennas() const { return primary.n_rows; }
    arma::uword n_users() const { return primary.n_cols; }
};

struct PowerBudget {
    double p_sdma_w = 0.0; // power carried by the legacy beams
    double p0_w = 0.0;     // budget for the secondary user's beam
};

struct QosSpec {
    arma::vec targets_bpcu; // K per-user rate floors, bits per channel use
};

// Subset of primary users (0-based indices) that decode the secondary
// user's signal before their own. Users are capped at 32 per scenario,
// far above anything the enumeration layer will accept.
class SicSet {
  public:
    SicSet() = default;
    SicSet(arma::uword k_users, std::uint32_t mask) : k_(k_users), mask_(mask) {
        if (k_users > 32)
            throw std::invalid_argument("SicSet: more than 32 users");
        if (k_users < 32 && (mask >> k_users) != 0)
            throw std::invalid_argument("SicSet: member index out of range");
    }

    static SicSet none(arma::uword k_users) { return SicSet(k_users, 0); }
    static SicSet all(arma::uword k_users) {
        return SicSet(k_users, k_users >= 32 ? ~std::uint32_t(0)
                                             : (std::uint32_t(1) << k_users) - 1);
    }
    static SicSet of(arma::uword k_users, std::initializer_list<arma::uword> members) {
        std::uint32_t m = 0;
        for (arma::uword i : members) {
            if (i >= k_users)
                throw std::invalid_argument("SicSet: member index out of range");
            m |= std::uint32_t(1) << i;
        }
        return SicSet(k_users, m);
    }

    arma::uword k_users() const { return k_; }
    std::uint32_t mask() const { return mask_; }
    bool contains(arma::uword i) const { return i < k_ && (mask_ >> i) & 1u; }
    bool empty() const { return mask_ == 0; }
    bool is_all() const { return mask_ == all(k_).mask_; }
    arma::uword size() const { return arma::uword(__builtin_popcount(mask_)); }

    std::vector<arma::uword> members() const {
        std::vector<arma::uword> out;
        for (arma::uword i = 0; i < k_; ++i)
            if (contains(i))
                out.push_back(i);
        return out;
    }
    std::vector<arma::uword> complement() const {
        std::vector<arma::uword> out;
        for (arma::uword i = 0; i < k_; ++i)
            if (!contains(i))
                out.push_back(i);
        return out;
    }

    bool operator==(const SicSet& o) const { return k_ == o.k_ && mask_ == o.mask_; }

  private:
    arma::uword k_ = 0;
    std::uint32_t mask_ = 0;
};

enum class Strategy {
    RideExisting, // scale one of the legacy beams
    NewBeam,      // synthesize a dedicated beam via relaxation
};

// One solved design for the secondary user.
struct BeamSolution {
    arma::cx_vec beam;        // length N, sqrt-watt amplitude
    SicSet sic_set;
    double rate_bpcu = 0.0;
    Strategy strategy = Strategy::RideExisting;
    std::optional<arma::uword> rider_index; // legacy beam used, ride-only
    bool feasible = true;
    // Set when the legacy design by itself cannot meet some user's rate
    // floor (its interference headroom clamps at zero). The solution is
    // still valid; downstream reporting surfaces the flag as a warning.
    bool legacy_infeasible = false;
};

struct Scenario {
    ChannelSet channels;
    PowerBudget power;
    QosSpec qos;
};

// Checks every construction invariant; throws std::invalid_argument naming
// the violated one.
void validate(const Scenario& scenario);

} // namespace beamkit

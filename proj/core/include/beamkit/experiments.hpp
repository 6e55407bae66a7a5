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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamkit/certificate.hpp"
#include "beamkit/model.hpp"
#include "beamkit/rng.hpp"
#include "beamkit/strategy_two.hpp"

namespace beamkit {

// --- deterministic two-user cases -----------------------------------------
//
// Two orthonormal primary channels on the standard basis and a secondary
// channel g = [sin(theta), cos(theta)] sweeping from one primary's
// direction to the other's; path loss omitted. One scenario per (theta,
// secondary budget) pair. Noise sits 10 dB below the 1 W legacy power:
// high enough that the interference headroom actually bites, which is
// what makes the beam choice move with theta and the budget.

struct DeterministicCase {
    int id = 0;
    double theta_rad = 0.0;
    double p0_dbm = 30.0;
    bool strategies_tie = false;            // riding matches the new beam
    std::vector<std::uint32_t> winning_sic; // acceptable winner masks
};

// The six canonical cases, ids 0..5.
const std::vector<DeterministicCase>& deterministic_cases();

// complex_perturbation rotates the (otherwise real) channel entries by
// tiny deterministic phases; the all-real layout is a known degenerate
// regime for the relaxation, and a 1e-6 nudge restores genericity without
// moving any rate noticeably.
Scenario deterministic_scenario(const DeterministicCase& c, double complex_perturbation = 0.0);

// --- random deployments -----------------------------------------------------

struct DeploymentConfig {
    arma::uword k_users = 2;       // antennas track the user count
    double square_edge_m = 6.0;    // users uniform in a square centered on the transmitter
    double secondary_x_m = 0.0;
    double secondary_y_m = 1.0;
    double pathloss_exponent = 3.0;
    double min_distance_m = 0.5;   // resample closer draws; keeps d^-3 finite
    double noise_dbm = -94.0;
    double p_sdma_dbm = 30.0;
    double rate_target_bpcu = 1.0;
    std::uint64_t master_seed = kDefaultSeed;
};

struct DeploymentDraw {
    ChannelSet channels;
    arma::mat user_positions_m; // 2 x K
    arma::vec distances_m;      // K
};

// Channels for one trial: position-dependent d^{-alpha/2} amplitude decay
// times i.i.d. circularly-symmetric Gaussian fading, secondary fixed at
// (x, y) with unit distance by default. Each trial's stream derives from
// (master_seed, trial), so trials are reproducible in any order.
DeploymentDraw sample_deployment(const DeploymentConfig& config, std::uint64_t trial);

Scenario deployment_scenario(const DeploymentConfig& config, const DeploymentDraw& draw,
                             double p0_dbm);

// --- sweeps ------------------------------------------------------------------

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    arma::mat user_positions_m;
    std::uint64_t channel_digest = 0;
    double rate_ride_bpcu = 0.0;
    double rate_new_beam_bpcu = 0.0;
    std::uint32_t winning_sic_ride = 0;
    std::uint32_t winning_sic_new = 0;
    std::vector<CertClass> certificates; // per solved subset
    arma::uword subsets_solved = 0;
    arma::uword subsets_rank_one = 0;
    bool new_beam_failed = false;
};

enum class SweepVariable { P0Grid, KGrid };

struct SweepSpec {
    SweepVariable variable = SweepVariable::P0Grid;
    std::vector<double> grid;       // dBm values, or user counts
    arma::uword trials_per_point = 200;
    SicPolicy policy = SicPolicy::FullEnumeration;
    double p0_dbm_for_k_sweep = 30.0;
    unsigned threads = 1;
};

struct SweepRow {
    std::string sweep_var;
    double value = 0.0;
    std::string strategy;
    double mean_rate_bpcu = 0.0;
    double stderr_bpcu = 0.0;
    arma::uword n_trials = 0;
    arma::uword n_failures = 0;
    double rank_one_fraction = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::vector<TrialRecord>> trials; // per grid point
};

// Monte-Carlo sweep over a budget grid or a user-count grid. Trials run
// embarrassingly parallel (up to `threads`), each from its own derived
// stream; the aggregation is a fixed-order reduction, so the output is a
// pure function of (config, spec).
SweepResult run_sweep(const DeploymentConfig& config, const SweepSpec& spec);

// CSV schema:
// sweep_var,value,strategy,mean_rate_bpcu,stderr,n_trials,n_failures,rank_one_fraction
void write_sweep_csv(const SweepResult& result, std::ostream& out);

std::uint64_t channel_digest(const ChannelSet& channels);

} // namespace beamkit

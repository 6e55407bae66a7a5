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

#include <cstdint>
#include <vector>

#include "beamkit/certificate.hpp"
#include "beamkit/model.hpp"
#include "beamkit/precoding.hpp"
#include "beamkit/rates.hpp"
#include "beamkit/sdp.hpp"

namespace beamkit {

// "Form a new beam": lift w to W = w w^H, drop the rank constraint, solve
// the relaxation per SIC subset, and recover a beam by eigenvector
// extraction or Gaussian randomization.

// No cancellation anywhere: maximize tr(G W) under the per-user
// interference caps and the power budget.
SdpInstance build_no_sic(const ChannelSet& channels, const RateContext& ctx,
                         const PowerBudget& budget);

// Users in `sic` cancel first: push the worst of the decode ratios up via
// the epigraph scalar z (= 2^rate - 1), keep the caps for the rest.
// Rejects the empty and the full set; those belong to the siblings.
SdpInstance build_partial_sic(const SicSet& sic, const ChannelSet& channels,
                              const RateContext& ctx, const PowerBudget& budget);

// Everyone cancels: only the decode ratios and the power budget remain.
SdpInstance build_full_sic(const ChannelSet& channels, const RateContext& ctx,
                           const PowerBudget& budget);

enum class ExtractionMethod { Eigenvector, Randomized };

struct ExtractionOptions {
    double rank_tol = 1e-6;          // second/top eigenvalue ratio for rank one
    arma::uword samples = 1000;      // Gaussian randomization draws
    std::uint64_t seed = 0;
};

struct ExtractedBeam {
    arma::cx_vec beam;
    ExtractionMethod method = ExtractionMethod::Eigenvector;
    arma::uword samples_used = 0;
};

// Rank-one recovery. Numerically rank-one W factors directly (the
// principal eigenpair), scaled down if a cap is grazed by solver residue.
// Otherwise draw samples from CN(0, W), scale each to the tightest cap,
// score by the instance's own objective (the exact quadratic forms of the
// candidate, never the relaxed values), and keep the best; the principal
// eigenvector rides along as one deterministic candidate. If every sample
// lands infeasible (possible only when a cap is exactly zero), fall back
// to the principal eigenvector projected onto the feasible face.
ExtractedBeam extract_beam(const arma::cx_mat& w_matrix, const SdpInstance& instance,
                           const ExtractionOptions& options = {});

// Everything recorded about one SIC subset on the way to the winner.
struct SdrOutcome {
    SicSet sic_set;
    SdpStatus status = SdpStatus::NumericalFailure;
    double sdr_value_bpcu = 0.0;    // relaxation bound, rate domain
    arma::uword w_rank = 0;
    arma::cx_vec beam;
    double achieved_rate_bpcu = 0.0; // exact rate of the recovered beam
    ExtractionMethod extraction = ExtractionMethod::Eigenvector;
    arma::uword randomization_samples = 0;
    Certificate certificate;        // valid when status == Optimal
    SdpResiduals solver_residuals;  // idem
};

enum class SicPolicy {
    FullEnumeration, // all 2^K subsets; capped at K <= 10
    Simplified,      // no cancellation, plus the strongest-channel user only
};

struct NewBeamSearch {
    BeamSolution solution;
    std::vector<SdrOutcome> subsets; // in evaluation order
};

// Relaxation search over SIC subsets. Subsets are visited smallest-first
// then lexicographically, a failed subset is recorded and skipped, and the
// winner is the best exact (replayed) rate with ties going to the earliest
// subset in that order. `seed` drives only the randomized extraction.
NewBeamSearch best_new_beam(const ChannelSet& channels, const Precoder& precoder,
                            const RateContext& ctx, const PowerBudget& budget,
                            SicPolicy policy, std::uint64_t seed = 0,
                            const SdpOptions& sdp_options = {});

} // namespace beamkit

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

#include "beamkit/strategy_two.hpp"

#include <algorithm>
#include <cmath>

#include "beamkit/rng.hpp"

namespace beamkit {

namespace {

arma::cx_mat outer(const arma::cx_vec& v) { return v * v.t(); }

double a_coeff_secondary(const RateContext& ctx) {
    return ctx.interference_secondary_w + ctx.noise_power_w;
}

double a_coeff_primary(const RateContext& ctx, arma::uword i) {
    return ctx.interference_primary_w(i) + ctx.noise_power_w;
}

} // namespace

SdpInstance build_no_sic(const ChannelSet& channels, const RateContext& ctx,
                         const PowerBudget& budget) {
    SdpInstance inst;
    inst.dim = channels.n_antennas();
    inst.objective = SdpObjective::MaximizeTrace;
    inst.objective_matrix = outer(channels.secondary);
    inst.trace_cap = budget.p0_w;
    for (arma::uword k = 0; k < channels.n_users(); ++k)
        inst.constraints.push_back({outer(channels.primary.col(k)), 0.0,
                                    ConstraintSense::LessEqual, ctx.tau_w(k)});
    return inst;
}

SdpInstance build_partial_sic(const SicSet& sic, const ChannelSet& channels,
                              const RateContext& ctx, const PowerBudget& budget) {
    if (sic.empty() || sic.is_all())
        throw std::invalid_argument(
            "build_partial_sic: set must be a proper nonempty subset; use the siblings");

    SdpInstance inst;
    inst.dim = channels.n_antennas();
    inst.objective = SdpObjective::MaximizeZ;
    inst.trace_cap = budget.p0_w;
    inst.constraints.push_back({outer(channels.secondary), a_coeff_secondary(ctx),
                                ConstraintSense::GreaterEqual, 0.0});
    for (arma::uword i : sic.members())
        inst.constraints.push_back({outer(channels.primary.col(i)), a_coeff_primary(ctx, i),
                                    ConstraintSense::GreaterEqual, 0.0});
    for (arma::uword j : sic.complement())
        inst.constraints.push_back({outer(channels.primary.col(j)), 0.0,
                                    ConstraintSense::LessEqual, ctx.tau_w(j)});
    return inst;
}

SdpInstance build_full_sic(const ChannelSet& channels, const RateContext& ctx,
                           const PowerBudget& budget) {
    SdpInstance inst;
    inst.dim = channels.n_antennas();
    inst.objective = SdpObjective::MaximizeZ;
    inst.trace_cap = budget.p0_w;
    inst.constraints.push_back({outer(channels.secondary), a_coeff_secondary(ctx),
                                ConstraintSense::GreaterEqual, 0.0});
    for (arma::uword i = 0; i < channels.n_users(); ++i)
        inst.constraints.push_back({outer(channels.primary.col(i)), a_coeff_primary(ctx, i),
                                    ConstraintSense::GreaterEqual, 0.0});
    return inst;
}

namespace {

constexpr double kBig = std::numeric_limits<double>::infinity();

// Largest power scale beta^2 that keeps beta * xi inside every cap; nullopt
// marks a direction that is flatly infeasible (a zero cap it cannot avoid).
std::optional<double> max_power_scale(const arma::cx_vec& xi, const SdpInstance& inst) {
    const double nrm2 = std::pow(arma::norm(xi), 2);
    if (nrm2 <= 0.0)
        return std::nullopt;
    const double tiny = 1e-14 * std::max(1.0, nrm2);
    double beta2 = inst.trace_cap / nrm2;
    for (const SdpConstraint& c : inst.constraints) {
        if (c.sense != ConstraintSense::LessEqual || c.z_coeff != 0.0)
            continue;
        const double val = std::real(arma::cdot(xi, c.matrix * xi));
        if (val <= tiny * std::max(1.0, arma::norm(c.matrix, "fro"))) {
            continue; // the direction never touches this cap
        }
        if (c.rhs <= 0.0)
            return std::nullopt;
        beta2 = std::min(beta2, c.rhs / val);
    }
    return beta2;
}

// Objective used to rank candidates: the candidate's own quadratic forms,
// never the relaxed matrix values.
double candidate_score(const arma::cx_vec& w, const SdpInstance& inst) {
    if (inst.objective == SdpObjective::MaximizeTrace)
        return std::real(arma::cdot(w, inst.objective_matrix * w));
    double z = kBig;
    for (const SdpConstraint& c : inst.constraints) {
        if (c.sense != ConstraintSense::GreaterEqual || c.z_coeff <= 0.0)
            continue;
        z = std::min(z, std::real(arma::cdot(w, c.matrix * w)) / c.z_coeff);
    }
    return z == kBig ? 0.0 : z;
}

} // namespace

ExtractedBeam extract_beam(const arma::cx_mat& w_matrix, const SdpInstance& instance,
                           const ExtractionOptions& options) {
    arma::vec ev;
    arma::cx_mat evec;
    arma::eig_sym(ev, evec, 0.5 * (w_matrix + w_matrix.t()));

    ExtractedBeam out;
    const arma::uword dim = w_matrix.n_rows;
    const double top = ev(dim - 1);
    if (top <= 0.0) {
        out.beam = arma::zeros<arma::cx_vec>(dim);
        return out;
    }
    const double second = dim > 1 ? std::max(ev(dim - 2), 0.0) : 0.0;

    if (second / top <= options.rank_tol) {
        arma::cx_vec w = std::sqrt(top) * evec.col(dim - 1);
        // shave off solver residue that grazes a cap
        double gamma2 = 1.0;
        const double nrm2 = std::pow(arma::norm(w), 2);
        if (nrm2 > instance.trace_cap)
            gamma2 = std::min(gamma2, instance.trace_cap / nrm2);
        for (const SdpConstraint& c : instance.constraints) {
            if (c.sense != ConstraintSense::LessEqual || c.z_coeff != 0.0)
                continue;
            const double val = std::real(arma::cdot(w, c.matrix * w));
            const double tiny = 1e-12 * std::max(1.0, arma::norm(c.matrix, "fro") * nrm2);
            if (val > c.rhs + tiny)
                gamma2 = std::min(gamma2, c.rhs > 0 ? c.rhs / val : 0.0);
        }
        out.beam = std::sqrt(std::max(gamma2, 0.0)) * w;
        out.method = ExtractionMethod::Eigenvector;
        return out;
    }

    // Gaussian randomization from CN(0, W); the principal eigenvector is
    // candidate zero.
    arma::cx_mat half = evec * arma::diagmat(arma::sqrt(arma::clamp(ev, 0.0, ev.max())));
    Rng rng(options.seed);

    arma::cx_vec best;
    double best_score = -1.0;
    auto consider = [&](const arma::cx_vec& xi) {
        const auto beta2 = max_power_scale(xi, instance);
        if (!beta2 || *beta2 <= 0.0)
            return;
        const arma::cx_vec w = std::sqrt(*beta2) * xi;
        const double score = candidate_score(w, instance);
        if (score > best_score) {
            best_score = score;
            best = w;
        }
    };

    consider(evec.col(dim - 1));
    for (arma::uword s = 0; s < options.samples; ++s) {
        arma::cx_vec eta(dim);
        for (arma::uword i = 0; i < dim; ++i)
            eta(i) = rng.complex_normal();
        consider(half * eta);
    }
    out.samples_used = options.samples;
    out.method = ExtractionMethod::Randomized;

    if (best_score >= 0.0 && best.n_elem == dim) {
        out.beam = best;
        return out;
    }

    // Every draw hit a zero cap: project the principal eigenvector onto the
    // joint null space of the zero-cap matrices and scale to the rest.
    arma::cx_vec u = evec.col(dim - 1);
    for (const SdpConstraint& c : instance.constraints) {
        if (c.sense != ConstraintSense::LessEqual || c.z_coeff != 0.0 || c.rhs > 0.0)
            continue;
        arma::vec cev;
        arma::cx_mat cvec;
        arma::eig_sym(cev, cvec, c.matrix);
        for (arma::uword i = 0; i < cev.n_elem; ++i)
            if (cev(i) > 1e-10 * std::max(cev.max(), 1.0))
                u -= cvec.col(i) * arma::cdot(cvec.col(i), u);
    }
    const double unorm = arma::norm(u);
    if (unorm > 1e-12) {
        u /= unorm;
        if (const auto beta2 = max_power_scale(u, instance); beta2 && *beta2 > 0.0)
            out.beam = std::sqrt(*beta2) * u;
    }
    if (out.beam.n_elem != dim)
        out.beam = arma::zeros<arma::cx_vec>(dim);
    return out;
}

NewBeamSearch best_new_beam(const ChannelSet& channels, const Precoder& precoder,
                            const RateContext& ctx, const PowerBudget& budget,
                            SicPolicy policy, std::uint64_t seed,
                            const SdpOptions& sdp_options) {
    (void)precoder; // interference context already folds the precoder in
    const arma::uword k = channels.n_users();

    std::vector<std::uint32_t> masks;
    if (policy == SicPolicy::FullEnumeration) {
        if (k > 10)
            throw std::invalid_argument(
                "best_new_beam: full enumeration is capped at 10 users; use Simplified");
        for (std::uint32_t m = 0; m < (1u << k); ++m)
            masks.push_back(m);
        std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
            const int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
            return pa != pb ? pa < pb : a < b;
        });
    } else {
        arma::uword strongest = 0;
        for (arma::uword i = 1; i < k; ++i)
            if (arma::norm(channels.primary.col(i)) > arma::norm(channels.primary.col(strongest)))
                strongest = i;
        masks = {0u, std::uint32_t(1) << strongest};
    }

    const DegeneracyFlags flags = detect_degeneracy(channels);
    const double a0 = ctx.interference_secondary_w + ctx.noise_power_w;

    NewBeamSearch search;
    std::optional<arma::uword> winner;
    for (std::uint32_t mask : masks) {
        const SicSet sic(k, mask);
        const SdpInstance inst = sic.empty()    ? build_no_sic(channels, ctx, budget)
                                 : sic.is_all() ? build_full_sic(channels, ctx, budget)
                                                : build_partial_sic(sic, channels, ctx, budget);
        const SdpResult result = solve(inst, sdp_options);

        SdrOutcome o;
        o.sic_set = sic;
        o.status = result.status;
        if (result.status != SdpStatus::Optimal) {
            o.beam = arma::zeros<arma::cx_vec>(channels.n_antennas());
            search.subsets.push_back(std::move(o));
            continue;
        }

        o.sdr_value_bpcu = inst.objective == SdpObjective::MaximizeTrace
                               ? std::log2(1.0 + std::max(result.objective_value, 0.0) / a0)
                               : std::log2(1.0 + std::max(result.z, 0.0));
        {
            const arma::vec ev = arma::sort(arma::eig_sym(result.W), "descend");
            o.w_rank = 0;
            for (arma::uword i = 0; i < ev.n_elem; ++i)
                if (ev(0) > 0 && ev(i) > 1e-6 * ev(0))
                    ++o.w_rank;
        }

        ExtractionOptions eo;
        eo.seed = derive_seed(seed, mask);
        ExtractedBeam ex = extract_beam(result.W, inst, eo);
        o.extraction = ex.method;
        o.randomization_samples = ex.samples_used;

        // replay the exact problem: power cap plus the interference caps of
        // the users that do not cancel
        arma::cx_vec w = ex.beam;
        double gamma2 = 1.0;
        const double p = std::pow(arma::norm(w), 2);
        if (p > budget.p0_w && p > 0)
            gamma2 = std::min(gamma2, budget.p0_w / p);
        if (!sic.is_all())
            for (arma::uword j : sic.complement()) {
                const double leak = std::norm(arma::cdot(channels.primary.col(j), w));
                const double slack = 1e-9 * std::max(ctx.tau_w(j), ctx.noise_power_w);
                if (leak > ctx.tau_w(j) + slack)
                    gamma2 = std::min(gamma2, ctx.tau_w(j) > 0 ? ctx.tau_w(j) / leak : 0.0);
            }
        w *= std::sqrt(std::max(gamma2, 0.0));
        o.beam = w;

        o.achieved_rate_bpcu = sic.empty()    ? rate_no_sic(w, channels, ctx)
                               : sic.is_all() ? rate_full_sic(w, channels, ctx)
                                              : rate_partial_sic(w, sic, channels, ctx);
        o.certificate = certify(inst, result, flags);
        o.solver_residuals = residuals(inst, result);

        search.subsets.push_back(std::move(o));
        const arma::uword idx = search.subsets.size() - 1;
        if (!winner || search.subsets[idx].achieved_rate_bpcu >
                           search.subsets[*winner].achieved_rate_bpcu)
            winner = idx;
    }

    BeamSolution& sol = search.solution;
    sol.strategy = Strategy::NewBeam;
    sol.legacy_infeasible = ctx.legacy_infeasible();
    if (winner) {
        const SdrOutcome& best = search.subsets[*winner];
        sol.beam = best.beam;
        sol.sic_set = best.sic_set;
        sol.rate_bpcu = best.achieved_rate_bpcu;
        sol.feasible = true;
    } else {
        sol.beam = arma::zeros<arma::cx_vec>(channels.n_antennas());
        sol.sic_set = SicSet::none(k);
        sol.rate_bpcu = 0.0;
        sol.feasible = false;
    }
    return search;
}

} // namespace beamkit

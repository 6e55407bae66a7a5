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

#include "beamkit/sdp.hpp"
#include "beamkit/strategy_two.hpp"
#include "fixtures.hpp"

using namespace beamkit;
using beamkit::testing::build;

namespace {

arma::cx_mat outer(const arma::cx_vec& v) { return v * v.t(); }

void check_healthy(const SdpInstance& inst, const SdpResult& res) {
    REQUIRE(res.status == SdpStatus::Optimal);
    const SdpResiduals r = residuals(inst, res);
    CHECK(r.primal_inf <= 1e-8);
    CHECK(r.dual_inf <= 1e-8);
    CHECK(r.comp_slack <= 1e-7);
    CHECK(r.psd_comp <= 1e-6);
    CHECK(r.gap <= 1e-6 * (1.0 + std::abs(res.objective_value)));
    CHECK(res.duals.min() >= -1e-10);
    CHECK(arma::eig_sym(res.W).min() >=
          -1e-8 * std::max(std::real(arma::trace(res.W)), 1e-12));
}

// one representative of each problem family on a random drop
std::vector<SdpInstance> family_instances(std::uint64_t trial) {
    const auto b = build(testing::random_deployment(2, 97531, trial));
    return {
        build_no_sic(b.scenario.channels, b.ctx, b.scenario.power),
        build_partial_sic(SicSet::of(2, {0}), b.scenario.channels, b.ctx, b.scenario.power),
        build_full_sic(b.scenario.channels, b.ctx, b.scenario.power),
    };
}

} // namespace

TEST_CASE("rank-one objective aligns with its eigenvector") {
    SdpInstance inst;
    inst.dim = 2;
    inst.objective = SdpObjective::MaximizeTrace;
    inst.objective_matrix = arma::zeros<arma::cx_mat>(2, 2);
    inst.objective_matrix(0, 0) = 1.0;
    inst.trace_cap = 1.0;

    const SdpResult res = solve(inst);
    check_healthy(inst, res);
    CHECK(res.objective_value == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::real(res.W(0, 0)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(res.W(1, 1)) < 1e-6);
}

TEST_CASE("empty feasible set is certified infeasible") {
    SdpInstance inst;
    inst.dim = 2;
    inst.objective = SdpObjective::MaximizeTrace;
    inst.objective_matrix = arma::eye<arma::cx_mat>(2, 2);
    inst.trace_cap = 0.0;
    inst.constraints.push_back({arma::eye<arma::cx_mat>(2, 2), 0.0,
                                ConstraintSense::GreaterEqual, 1.0});
    CHECK(solve(inst).status == SdpStatus::Infeasible);
}

TEST_CASE("infeasibility is detected through the interior-point ray") {
    SdpInstance inst;
    inst.dim = 2;
    inst.objective = SdpObjective::MaximizeTrace;
    inst.objective_matrix = arma::eye<arma::cx_mat>(2, 2);
    inst.trace_cap = 1.0;
    // tr(G W) >= 5 cannot fit under tr(W) <= 1 with G = e1 e1^H
    arma::cx_mat g = arma::zeros<arma::cx_mat>(2, 2);
    g(0, 0) = 1.0;
    inst.constraints.push_back({g, 0.0, ConstraintSense::GreaterEqual, 5.0});
    CHECK(solve(inst).status == SdpStatus::Infeasible);
}

TEST_CASE("hand-built one-dimensional optimal pair has vanishing residuals") {
    // max 2 W s.t. W <= 3 (trace cap): W* = 3, cap dual 2, psd dual 0
    SdpInstance inst;
    inst.dim = 1;
    inst.objective = SdpObjective::MaximizeTrace;
    inst.objective_matrix = arma::cx_mat(1, 1, arma::fill::value(arma::cx_double(2.0, 0.0)));
    inst.trace_cap = 3.0;

    SdpResult res;
    res.status = SdpStatus::Optimal;
    res.W = arma::cx_mat(1, 1, arma::fill::value(arma::cx_double(3.0, 0.0)));
    res.z = 0.0;
    res.objective_value = 6.0;
    res.duals = arma::vec{};
    res.trace_cap_dual = 2.0;
    res.z_dual = 0.0;
    res.psd_dual = arma::zeros<arma::cx_mat>(1, 1);
    res.gap = 0.0;

    const SdpResiduals r = residuals(inst, res);
    CHECK(r.primal_inf < 1e-10);
    CHECK(r.dual_inf < 1e-10);
    CHECK(r.comp_slack < 1e-10);
    CHECK(r.psd_comp < 1e-10);
    CHECK(r.gap < 1e-10);

    // a deliberate perturbation must show up
    SdpResult bad = res;
    bad.W(0, 0) += 1e-3;
    const SdpResiduals rb = residuals(inst, bad);
    CHECK((rb.primal_inf > 1e-4 || rb.comp_slack > 1e-4));
}

TEST_CASE("reported gap matches objectives recomputed from scratch") {
    for (std::uint64_t trial = 0; trial < 5; ++trial)
        for (const SdpInstance& inst : family_instances(trial)) {
            const SdpResult res = solve(inst);
            REQUIRE(res.status == SdpStatus::Optimal);
            const double pobj = inst.objective == SdpObjective::MaximizeZ
                                    ? res.z
                                    : std::real(arma::trace(inst.objective_matrix * res.W));
            double dobj = res.trace_cap_dual * inst.trace_cap;
            for (arma::uword m = 0; m < inst.constraints.size(); ++m) {
                const double s =
                    inst.constraints[m].sense == ConstraintSense::LessEqual ? 1.0 : -1.0;
                dobj += res.duals(m) * s * inst.constraints[m].rhs;
            }
            CHECK(residuals(inst, res).gap ==
                  doctest::Approx(std::abs(dobj - pobj)).epsilon(1e-9));
            CHECK(res.gap == doctest::Approx(dobj - pobj).epsilon(1e-9));
        }
}

TEST_CASE("interference-capped design on the workhorse scenario") {
    // reduced budget: the relaxation puts the whole budget on the secondary
    // channel's own direction
    const auto b = build(testing::ortho2(27.0));
    const SdpInstance inst = build_no_sic(b.scenario.channels, b.ctx, b.scenario.power);
    REQUIRE(inst.constraints.size() == 2);
    CHECK(inst.constraints[0].rhs == doctest::Approx(0.4999).epsilon(1e-12));
    CHECK(inst.trace_cap == doctest::Approx(0.50119).epsilon(1e-4));

    const SdpResult res = solve(inst);
    check_healthy(inst, res);
    CHECK(res.objective_value == doctest::Approx(b.scenario.power.p0_w).epsilon(1e-6));

    arma::vec ev;
    arma::cx_mat evec;
    arma::eig_sym(ev, evec, res.W);
    const arma::cx_vec w = std::sqrt(ev(1)) * evec.col(1);
    CHECK(std::abs(w(0)) == doctest::Approx(0.5006).epsilon(1e-3));
    CHECK(std::abs(w(1)) == doctest::Approx(0.5006).epsilon(1e-3));
}

TEST_CASE("balanced full-cancellation optimum on the workhorse scenario") {
    const auto b = build(testing::ortho2());
    const SdpInstance inst = build_full_sic(b.scenario.channels, b.ctx, b.scenario.power);
    const SdpResult res = solve(inst);
    check_healthy(inst, res);
    CHECK(res.z == doctest::Approx(0.5 / 0.5001).epsilon(1e-5));
}

TEST_CASE("single-antenna epigraph problem matches the closed form") {
    // max z s.t. |g|^2 W >= a0 z, |h|^2 W >= a1 z, W <= P0:
    // z* = P0 min(|g|^2/a0, |h|^2/a1)
    SdpInstance inst;
    inst.dim = 1;
    inst.objective = SdpObjective::MaximizeZ;
    inst.trace_cap = 0.8;
    const double g2 = 1.7, h2 = 0.9, a0 = 0.3, a1 = 0.25;
    inst.constraints.push_back({arma::cx_mat(1, 1, arma::fill::value(arma::cx_double(g2, 0))),
                                a0, ConstraintSense::GreaterEqual, 0.0});
    inst.constraints.push_back({arma::cx_mat(1, 1, arma::fill::value(arma::cx_double(h2, 0))),
                                a1, ConstraintSense::GreaterEqual, 0.0});
    const SdpResult res = solve(inst);
    check_healthy(inst, res);
    CHECK(res.z ==
          doctest::Approx(0.8 * std::min(g2 / a0, h2 / a1)).epsilon(1e-7));
}

TEST_CASE("zero budget collapses to the zero solution") {
    const auto b = build(testing::ortho2());
    SdpInstance inst = build_full_sic(b.scenario.channels, b.ctx, b.scenario.power);
    inst.trace_cap = 0.0;
    const SdpResult res = solve(inst);
    CHECK(res.status == SdpStatus::Optimal);
    CHECK(res.z == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(arma::norm(res.W, "fro") == 0.0);
}

TEST_CASE("zero interference cap forces the beam off that channel") {
    Scenario s = testing::ortho2();
    const auto b = build(s);
    SdpInstance inst = build_no_sic(s.channels, b.ctx, s.power);
    inst.constraints[0].rhs = 0.0; // user 1 tolerates nothing

    const SdpResult res = solve(inst);
    REQUIRE(res.status == SdpStatus::Optimal);
    CHECK(res.eliminated_constraints == std::vector<arma::uword>{0});
    // W confined to e2: best is tau_2 worth of power there
    const double leak = std::real(
        arma::cdot(s.channels.primary.col(0), res.W * s.channels.primary.col(0)));
    CHECK(std::abs(leak) < 1e-12);
    CHECK(res.objective_value == doctest::Approx(0.4999 * 0.5).epsilon(1e-6));
}

TEST_CASE("solver health and KKT stationarity across the problem families") {
    for (std::uint64_t trial = 0; trial < 10; ++trial)
        for (const SdpInstance& inst : family_instances(trial)) {
            const SdpResult res = solve(inst);
            check_healthy(inst, res);
            // stationarity replay: cap I + sum(signed duals)A - G == psd_dual
            arma::cx_mat station =
                -inst.objective_matrix +
                res.trace_cap_dual * arma::eye<arma::cx_mat>(inst.dim, inst.dim);
            for (arma::uword m = 0; m < inst.constraints.size(); ++m) {
                const double sg =
                    inst.constraints[m].sense == ConstraintSense::LessEqual ? 1.0 : -1.0;
                station += res.duals(m) * sg * inst.constraints[m].matrix;
            }
            CHECK(arma::norm(station - res.psd_dual, "fro") <=
                  1e-6 * (1.0 + arma::accu(arma::abs(res.duals))));
        }
}

TEST_CASE("identical input produces an identical solve") {
    const auto insts = family_instances(3);
    const SdpResult a = solve(insts[2]);
    const SdpResult b = solve(insts[2]);
    CHECK(a.iterations == b.iterations);
    CHECK(arma::norm(a.W - b.W, "fro") == 0.0);
    CHECK(a.z == b.z);
    CHECK(arma::norm(a.duals - b.duals, 2) == 0.0);
}

TEST_CASE("complex and embedded real instances agree") {
    for (std::uint64_t trial = 0; trial < 7; ++trial)
        for (const SdpInstance& inst : family_instances(trial)) {
            const SdpResult cres = solve(inst);
            REQUIRE(cres.status == SdpStatus::Optimal);
            const SdpInstance emb = real_embedding(inst);
            const SdpResult eres = solve(emb);
            REQUIRE(eres.status == SdpStatus::Optimal);
            CHECK(std::abs(cres.objective_value - eres.objective_value) <=
                  1e-7 * (1.0 + std::abs(cres.objective_value)));

            // the embedded spectrum pairs up, so its rank doubles
            const arma::vec ce = arma::sort(arma::eig_sym(cres.W), "descend");
            const arma::vec ee = arma::sort(arma::eig_sym(eres.W), "descend");
            const double top = std::max(ee.max(), 1e-300);
            for (arma::uword i = 0; i + 1 < ee.n_elem; i += 2)
                CHECK(std::abs(ee(i) - ee(i + 1)) <= 1e-8 * std::max(1.0, top));
            arma::uword crank = 0, erank = 0;
            for (arma::uword i = 0; i < ce.n_elem; ++i)
                if (ce(i) > 1e-6 * ce.max())
                    ++crank;
            for (arma::uword i = 0; i < ee.n_elem; ++i)
                if (ee(i) > 1e-6 * ee.max())
                    ++erank;
            CHECK(erank == 2 * crank);
        }
}

TEST_CASE("instance validation") {
    SdpInstance inst;
    inst.dim = 65;
    inst.objective = SdpObjective::MaximizeZ;
    inst.trace_cap = 1.0;
    CHECK_THROWS_AS(solve(inst), std::invalid_argument);

    inst.dim = 2;
    SdpConstraint c;
    c.matrix = arma::cx_mat{{arma::cx_double(0, 0), arma::cx_double(1, 0)},
                            {arma::cx_double(0, 0), arma::cx_double(0, 0)}}; // not Hermitian
    c.z_coeff = 1.0;
    c.sense = ConstraintSense::GreaterEqual;
    inst.constraints.push_back(c);
    CHECK_THROWS_WITH_AS(solve(inst), doctest::Contains("Hermitian"), std::invalid_argument);
}

TEST_CASE("debug dump is valid JSON with complex grids") {
    const auto insts = family_instances(0);
    std::ostringstream out;
    dump_instance(insts[0], out);
    const std::string text = out.str();
    CHECK(text.find("\"objective\": \"maximize_trace\"") != std::string::npos);
    CHECK(text.find("\"re\"") != std::string::npos);
    CHECK(text.find("\"im\"") != std::string::npos);
}

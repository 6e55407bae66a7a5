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
#include <iosfwd>
#include <vector>

namespace beamkit {

enum class SdpObjective {
    MaximizeTrace, // maximize tr(objective_matrix * W)
    MaximizeZ,     // maximize the scalar z
};

enum class ConstraintSense { LessEqual, GreaterEqual };

// One linear constraint  tr(matrix * W)  <=/>=  z_coeff * z + rhs.
struct SdpConstraint {
    arma::cx_mat matrix; // Hermitian, dim x dim
    double z_coeff = 0.0;
    ConstraintSense sense = ConstraintSense::LessEqual;
    double rhs = 0.0;
};

// A small dense semidefinite program in one Hermitian matrix variable
// W (PSD, dim x dim) and one nonnegative scalar z:
//
//   maximize    tr(G W)   or   z
//   subject to  tr(A_m W) <=/>= b_m z + c_m     m = 1..M
//               tr(W) <= trace_cap,  W >= 0,  z >= 0.
//
// The design envelope is dim <= 64 and a handful of constraints; the
// solver is dense and favors robustness over asymptotic speed.
struct SdpInstance {
    arma::uword dim = 0;
    SdpObjective objective = SdpObjective::MaximizeTrace;
    arma::cx_mat objective_matrix; // used by MaximizeTrace only
    std::vector<SdpConstraint> constraints;
    double trace_cap = 0.0;
};

enum class SdpStatus {
    Optimal,          // KKT residuals within tolerance
    Infeasible,       // certified by a dual improving ray (or an empty face)
    NumericalFailure, // stalled or hit the iteration cap short of tolerance
};

// Primal/dual solution. Dual multipliers are reported for the paper-style
// Lagrangian orientation: `duals[m]` multiplies constraint m brought to
// <= form (a >= constraint is negated first), `trace_cap_dual` multiplies
// tr(W) - trace_cap, `z_dual` multiplies -z, and `psd_dual` is the PSD
// matrix multiplier of W. At optimality
//   psd_dual = trace_cap_dual * I + sum_m duals[m] * sign_m * A_m - G
// (G absent for MaximizeZ), psd_dual >= 0 and psd_dual * W = 0.
struct SdpResult {
    SdpStatus status = SdpStatus::NumericalFailure;
    arma::cx_mat W;
    double z = 0.0;
    double objective_value = 0.0;
    arma::vec duals;
    double trace_cap_dual = 0.0;
    double z_dual = 0.0;
    arma::cx_mat psd_dual;
    double gap = 0.0; // dual objective minus primal objective
    arma::uword iterations = 0;
    // Constraints eliminated up front because a zero right-hand side plus a
    // PSD matrix forces W onto a face of the cone (e.g. a zero interference
    // cap). Their multipliers are reported as zero; exact dual attainment
    // can genuinely fail on such instances, and the optimality certificate
    // then refers to the reduced problem the solver actually ran.
    std::vector<arma::uword> eliminated_constraints;
};

// Normalized KKT residuals, recomputed from scratch in the original
// coordinates (never copied out of the solver's internal state):
//   primal_inf: worst constraint violation / (1 + |rhs| + |b z|)
//   dual_inf:   stationarity defect and negative-part of the dual variables
//   comp_slack: sum of multiplier*slack products / (1 + |pobj| + |dobj|)
//   psd_comp:   ||psd_dual * W||_F / ||W||_F
//   gap:        |dual objective - primal objective|, absolute
struct SdpResiduals {
    double primal_inf = 0.0;
    double dual_inf = 0.0;
    double comp_slack = 0.0;
    double psd_comp = 0.0;
    double gap = 0.0;
};

struct SdpOptions {
    double feas_tol = 1e-8;     // primal/dual feasibility gate
    double gap_tol = 1e-7;      // interior-point gap target
    double comp_tol = 1e-7;     // scalar complementarity gate
    double psd_comp_tol = 1e-6; // ||psd_dual W||_F / ||W||_F gate
    arma::uword max_iter = 200;
};

// Primal-dual path-following interior-point solve. The complex Hermitian
// problem is mapped onto its real-symmetric embedding (z rides along as a
// 1x1 block); the run is deterministic: fixed cold start, no randomized
// pivoting, bit-identical iterate path for identical input.
SdpResult solve(const SdpInstance& instance, const SdpOptions& options = {});

// Recomputes the residuals behind the Optimal gate; independent of the
// solver internals.
SdpResiduals residuals(const SdpInstance& instance, const SdpResult& result);

// The 2N x 2N real-symmetric rewrite of a complex instance: every matrix A
// becomes [re A, -im A; im A, re A] / 2, the trace cap doubles, objective
// values are preserved, and each eigenvalue of a complex solution shows up
// twice. Used by the regression tests that pin complex/real agreement.
SdpInstance real_embedding(const SdpInstance& instance);

// Debug dump (matrices as {re, im} grids) for cross-checks against outside
// convex-optimization tooling.
void dump_instance(const SdpInstance& instance, std::ostream& out);

} // namespace beamkit

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
//
// Layout of the solve:
//
//   complex instance
//     -> preprocessing (trivial rows, zero-cap faces, facial reduction of
//        zero-rhs PSD rows, which otherwise leave the cone without a
//        strict interior)
//     -> diagonal scaling (W by the trace cap, z by a geometric-mean ratio
//        of the coupling rows, every row and the objective to unit size)
//     -> real-symmetric embedding  A -> [re A, -im A; im A, re A]
//     -> standard-form conic program  min <C,Y> s.t. <A_m,Y> = rhs_m,
//        Y = diag(X, z, slacks) >= 0
//     -> Mehrotra predictor-corrector primal-dual interior point (HKM
//        scaling direction, infeasible start)
//     -> map back, rebuild duals in original coordinates, verify the KKT
//        residuals from scratch before declaring Optimal.

#include "beamkit/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <ostream>

namespace beamkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_of(ConstraintSense s) {
    return s == ConstraintSense::LessEqual ? 1.0 : -1.0;
}

// --- real-symmetric embedding -------------------------------------------

arma::mat embed_herm(const arma::cx_mat& a) {
    const arma::mat re = arma::real(a);
    const arma::mat im = arma::imag(a);
    return arma::join_cols(arma::join_rows(re, -im), arma::join_rows(im, re));
}

arma::cx_mat unembed_herm(const arma::mat& x) {
    const arma::uword d = x.n_rows / 2;
    const arma::mat re =
        0.5 * (x.submat(0, 0, d - 1, d - 1) + x.submat(d, d, 2 * d - 1, 2 * d - 1));
    const arma::mat im =
        0.5 * (x.submat(d, 0, 2 * d - 1, d - 1) - x.submat(0, d, d - 1, 2 * d - 1));
    arma::cx_mat w(re, im);
    return 0.5 * (w + w.t());
}

// Orthogonal projection onto the embedded-Hermitian structure; an identity
// in exact arithmetic for data built by embed_herm, it pins the iterates to
// the structure despite rounding, which keeps the recovered complex matrix
// exact and the embedded spectrum in pairs.
arma::mat structure_project(const arma::mat& x) {
    const arma::uword d = x.n_rows / 2;
    const arma::mat p = x.submat(0, 0, d - 1, d - 1);
    const arma::mat q = x.submat(0, d, d - 1, 2 * d - 1);
    const arma::mat r = x.submat(d, 0, 2 * d - 1, d - 1);
    const arma::mat s = x.submat(d, d, 2 * d - 1, 2 * d - 1);
    const arma::mat a = 0.5 * (p + s);
    const arma::mat b = 0.5 * (q - r);
    arma::mat out = arma::join_cols(arma::join_rows(a, b), arma::join_rows(-b, a));
    return 0.5 * (out + out.t());
}

// --- block-diagonal cone algebra ------------------------------------------
//
// A point is one dense symmetric block plus a vector of 1x1 blocks
// (the scalar z when present, then one slack per row).

struct Blocks {
    arma::mat X;
    arma::vec v;
};

Blocks zeros_like(arma::uword n, arma::uword nv) {
    return Blocks{arma::zeros(n, n), arma::zeros(nv)};
}

double bdot(const Blocks& a, const Blocks& b) {
    return arma::accu(a.X % b.X) + arma::dot(a.v, b.v);
}

double bnorm(const Blocks& a) {
    return std::sqrt(std::max(0.0, bdot(a, a)));
}

Blocks operator+(const Blocks& a, const Blocks& b) { return {a.X + b.X, a.v + b.v}; }
Blocks operator-(const Blocks& a, const Blocks& b) { return {a.X - b.X, a.v - b.v}; }
Blocks operator*(double c, const Blocks& a) { return {c * a.X, c * a.v}; }

struct RowFunc {
    arma::mat FX;  // symmetric
    arma::vec fv;
};

double row_apply(const RowFunc& r, const Blocks& y) {
    return arma::accu(r.FX % y.X) + arma::dot(r.fv, y.v);
}

// The internal standard-form problem. The last row is always the trace cap.
struct InternalProblem {
    arma::uword n = 0;  // embedded dense block size (2 * reduced dim)
    arma::uword nv = 0; // scalar blocks: has_z + one slack per row
    bool has_z = false;
    std::vector<RowFunc> rows;
    arma::vec rhs;
    Blocks C; // min-form objective

    Blocks adjoint(const arma::vec& y) const {
        Blocks out = zeros_like(n, nv);
        for (arma::uword m = 0; m < rows.size(); ++m) {
            out.X += y(m) * rows[m].FX;
            out.v += y(m) * rows[m].fv;
        }
        return out;
    }
};

arma::mat herm2(const arma::mat& m) { return 0.5 * (m + m.t()); }

// Largest step alpha with P + alpha dP staying PSD, for strictly PD P.
double max_step(const Blocks& p, const Blocks& dp) {
    double alpha = kInf;
    if (p.X.n_rows > 0) {
        arma::mat l;
        if (!arma::chol(l, p.X, "lower")) {
            // marginally PD from rounding; fall back to an eigen floor
            arma::vec ev;
            arma::mat vec;
            arma::eig_sym(ev, vec, herm2(p.X));
            const double floor = std::max(ev.max(), 1.0) * 1e-14;
            arma::mat fixed = vec * arma::diagmat(arma::clamp(ev, floor, kInf)) * vec.t();
            if (!arma::chol(l, herm2(fixed), "lower"))
                return 0.0;
        }
        const arma::mat t1 = arma::solve(arma::trimatl(l), dp.X);
        const arma::mat w = herm2(arma::solve(arma::trimatl(l), t1.t()));
        const double lam_min = arma::eig_sym(w).min();
        if (lam_min < 0)
            alpha = std::min(alpha, -1.0 / lam_min);
    }
    for (arma::uword i = 0; i < p.v.n_elem; ++i)
        if (dp.v(i) < 0)
            alpha = std::min(alpha, -p.v(i) / dp.v(i));
    return alpha;
}

struct IpmOutput {
    Blocks Y, S;
    arma::vec y;
    arma::uword iterations = 0;
    bool infeasible_certified = false;
};

IpmOutput run_ipm(const InternalProblem& p, arma::uword max_iter) {
    const arma::uword m_rows = p.rows.size();
    const double nu = double(p.n) + double(p.nv);

    IpmOutput st;
    st.Y.X = 0.5 * arma::eye(p.n, p.n);
    st.Y.v = arma::ones(p.nv);
    st.y = arma::zeros(m_rows);
    st.S.X = (1.0 + arma::norm(p.C.X, "fro")) * arma::eye(p.n, p.n);
    st.S.v = 1.0 + arma::abs(p.C.v);

    const double rhs_scale = 1.0 + arma::norm(p.rhs, "inf");
    const double c_scale = 1.0 + bnorm(p.C);

    double mu = bdot(st.Y, st.S) / nu;
    arma::uword stall = 0;

    for (arma::uword iter = 1; iter <= max_iter; ++iter) {
        st.iterations = iter;

        arma::vec rp(m_rows);
        for (arma::uword m = 0; m < m_rows; ++m)
            rp(m) = p.rhs(m) - row_apply(p.rows[m], st.Y);
        const Blocks rd = p.C - p.adjoint(st.y) - st.S;

        const double pobj = bdot(p.C, st.Y);
        const double dobj = arma::dot(st.y, p.rhs);
        const double pinf = arma::norm(rp, "inf") / rhs_scale;
        const double dinf = bnorm(rd) / c_scale;
        const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        mu = bdot(st.Y, st.S) / nu;

        if (pinf <= 5e-11 && dinf <= 5e-11 && relgap <= 2e-9)
            return st;

        // Primal infeasibility manifests as a dual improving ray: a scaled
        // y with A*(y) inside the negative cone and a positive value.
        const double ynorm = arma::norm(st.y, 2);
        if (ynorm > 1.0 && dobj > 0) {
            const arma::vec yhat = st.y / ynorm;
            const Blocks shat = -1.0 * p.adjoint(yhat);
            double defect = 0.0;
            if (p.n > 0)
                defect = std::max(defect, -arma::eig_sym(herm2(shat.X)).min());
            if (p.nv > 0)
                defect = std::max(defect, -shat.v.min());
            if (arma::dot(yhat, p.rhs) > 1e-7 && defect <= 1e-9) {
                st.infeasible_certified = true;
                return st;
            }
        }

        // HKM Newton system: eliminate dY and dS, solve the Schur
        // complement in dy, substitute back.
        arma::mat sx_inv;
        if (!arma::inv_sympd(sx_inv, herm2(st.S.X)))
            break;
        sx_inv = herm2(sx_inv);

        std::vector<Blocks> k(m_rows);
        arma::mat schur(m_rows, m_rows);
        for (arma::uword j = 0; j < m_rows; ++j) {
            k[j].X = herm2(st.Y.X * p.rows[j].FX * sx_inv);
            k[j].v = st.Y.v % p.rows[j].fv / st.S.v;
        }
        for (arma::uword i = 0; i < m_rows; ++i)
            for (arma::uword j = 0; j <= i; ++j) {
                const double val =
                    arma::accu(p.rows[i].FX % k[j].X) + arma::dot(p.rows[i].fv, k[j].v);
                schur(i, j) = val;
                schur(j, i) = val;
            }

        arma::mat schur_chol;
        {
            double ridge = 0.0;
            arma::mat trial = schur;
            const double base = std::max(arma::trace(schur) / double(m_rows), 1e-14);
            while (!arma::chol(schur_chol, trial, "lower")) {
                ridge = (ridge == 0.0) ? base * 1e-13 : ridge * 100.0;
                if (ridge > base * 1e-2)
                    break;
                trial = schur + ridge * arma::eye(m_rows, m_rows);
            }
            if (schur_chol.n_rows != m_rows)
                break;
        }

        auto schur_solve = [&](const arma::vec& b) {
            return arma::solve(arma::trimatu(schur_chol.t()),
                               arma::solve(arma::trimatl(schur_chol), b));
        };

        Blocks sinv;
        sinv.X = sx_inv;
        sinv.v = 1.0 / st.S.v;

        auto direction = [&](const Blocks& rc) {
            struct Dir {
                Blocks dY, dS;
                arma::vec dy;
            } d;
            Blocks t;
            t.X = herm2(st.Y.X * rd.X * sx_inv);
            t.v = st.Y.v % rd.v / st.S.v;
            arma::vec h(m_rows);
            for (arma::uword i = 0; i < m_rows; ++i)
                h(i) = rp(i) - row_apply(p.rows[i], rc) + row_apply(p.rows[i], t);
            d.dy = schur_solve(h);
            d.dS = rd - p.adjoint(d.dy);
            Blocks yds;
            yds.X = herm2(st.Y.X * d.dS.X * sx_inv);
            yds.v = st.Y.v % d.dS.v / st.S.v;
            d.dY = rc - yds;
            d.dY.X = herm2(d.dY.X);
            return d;
        };

        // predictor
        const auto aff = direction(-1.0 * st.Y);
        const double ap_aff = std::min(1.0, 0.98 * max_step(st.Y, aff.dY));
        const double ad_aff = std::min(1.0, 0.98 * max_step(st.S, aff.dS));
        const Blocks y_aff = st.Y + ap_aff * aff.dY;
        const Blocks s_aff = st.S + ad_aff * aff.dS;
        const double mu_aff = bdot(y_aff, s_aff) / nu;
        double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
        sigma = std::clamp(sigma, 1e-8, 1.0);

        // corrector
        Blocks rc;
        rc.X = sigma * mu * sinv.X - st.Y.X - herm2(aff.dY.X * aff.dS.X * sx_inv);
        rc.v = sigma * mu * sinv.v - st.Y.v - aff.dY.v % aff.dS.v / st.S.v;
        const auto dir = direction(rc);

        const double ap = std::min(1.0, 0.98 * max_step(st.Y, dir.dY));
        const double ad = std::min(1.0, 0.98 * max_step(st.S, dir.dS));

        st.Y = st.Y + ap * dir.dY;
        st.y = st.y + ad * dir.dy;
        st.S = st.S + ad * dir.dS;
        if (p.n > 0) {
            st.Y.X = structure_project(st.Y.X);
            st.S.X = structure_project(st.S.X);
        }

        const double mu_new = bdot(st.Y, st.S) / nu;
        if (mu_new > 0.9999 * mu || std::max(ap, ad) < 1e-5) {
            if (++stall >= 5)
                break;
        } else {
            stall = 0;
        }
    }
    return st;
}

// --- preprocessing ---------------------------------------------------------

struct RowClass {
    std::vector<arma::uword> kept;
    std::vector<arma::uword> face;  // zero-rhs PSD <= rows: force W off their range
    std::vector<arma::uword> dropped;
    bool infeasible = false;
};

bool is_psd(const arma::cx_mat& a, double scale) {
    const arma::vec ev = arma::eig_sym(a);
    return ev.min() >= -1e-12 * std::max(scale, 1.0);
}

RowClass classify_rows(const SdpInstance& inst) {
    RowClass rc;
    for (arma::uword m = 0; m < inst.constraints.size(); ++m) {
        const SdpConstraint& c = inst.constraints[m];
        const double a_norm = arma::norm(c.matrix, "fro");
        if (a_norm == 0.0 && c.z_coeff == 0.0) {
            // 0 <=/>= rhs: either vacuous or plainly impossible
            const bool ok = c.sense == ConstraintSense::LessEqual ? c.rhs >= 0 : c.rhs <= 0;
            if (!ok)
                rc.infeasible = true;
            rc.dropped.push_back(m);
            continue;
        }
        if (c.z_coeff == 0.0 && a_norm > 0.0 && c.rhs <= 0.0 && is_psd(c.matrix, a_norm)) {
            if (c.sense == ConstraintSense::LessEqual) {
                if (c.rhs < 0.0) {
                    rc.infeasible = true; // tr(A W) >= 0 > rhs
                    rc.dropped.push_back(m);
                } else {
                    rc.face.push_back(m);
                }
                continue;
            }
            // tr(A W) >= rhs with rhs <= 0 holds for every PSD W
            rc.dropped.push_back(m);
            continue;
        }
        rc.kept.push_back(m);
    }
    return rc;
}

// z-interval of a single row evaluated at W = 0; [lo, hi] intersection.
bool intersect_z_interval(const SdpConstraint& c, double& lo, double& hi) {
    const double b = c.z_coeff;
    const double rhs = c.rhs;
    if (c.sense == ConstraintSense::LessEqual) {
        // 0 <= b z + rhs
        if (b > 0)
            lo = std::max(lo, -rhs / b);
        else if (b < 0)
            hi = std::min(hi, -rhs / b);
        else if (rhs < 0)
            return false;
    } else {
        // 0 >= b z + rhs
        if (b > 0)
            hi = std::min(hi, -rhs / b);
        else if (b < 0)
            lo = std::max(lo, -rhs / b);
        else if (rhs > 0)
            return false;
    }
    return true;
}

double lambda_max_herm(const arma::cx_mat& a) {
    if (a.n_rows == 0)
        return 0.0;
    return arma::eig_sym(a).max();
}

SdpInstance sanitized(const SdpInstance& instance) {
    if (instance.dim == 0)
        throw std::invalid_argument("sdp: dimension must be positive");
    if (instance.dim > 64)
        throw std::invalid_argument("sdp: dimension exceeds the dense design envelope (64)");
    if (!std::isfinite(instance.trace_cap))
        throw std::invalid_argument("sdp: trace cap must be finite");

    auto check_herm = [&](const arma::cx_mat& a, const char* what) {
        if (a.n_rows != instance.dim || a.n_cols != instance.dim)
            throw std::invalid_argument(std::string("sdp: ") + what + " has wrong dimensions");
        if (!a.is_finite())
            throw std::invalid_argument(std::string("sdp: ") + what + " has nonfinite entries");
        const double defect = arma::abs(a - a.t()).max();
        const double scale = std::max(1.0, arma::abs(a).max());
        if (defect > 1e-12 * scale)
            throw std::invalid_argument(std::string("sdp: ") + what + " is not Hermitian");
    };

    SdpInstance inst = instance;
    if (inst.objective == SdpObjective::MaximizeTrace) {
        check_herm(inst.objective_matrix, "objective matrix");
        inst.objective_matrix = 0.5 * (inst.objective_matrix + inst.objective_matrix.t());
    } else {
        inst.objective_matrix = arma::zeros<arma::cx_mat>(inst.dim, inst.dim);
    }
    for (auto& c : inst.constraints) {
        check_herm(c.matrix, "constraint matrix");
        if (!std::isfinite(c.z_coeff) || !std::isfinite(c.rhs))
            throw std::invalid_argument("sdp: constraint scalars must be finite");
        c.matrix = 0.5 * (c.matrix + c.matrix.t());
    }
    return inst;
}

} // namespace

SdpResult solve(const SdpInstance& instance, const SdpOptions& options) {
    const SdpInstance inst = sanitized(instance);
    const arma::uword dim = inst.dim;
    const arma::uword n_cons = inst.constraints.size();
    const bool max_z = inst.objective == SdpObjective::MaximizeZ;

    SdpResult res;
    res.W = arma::zeros<arma::cx_mat>(dim, dim);
    res.psd_dual = arma::zeros<arma::cx_mat>(dim, dim);
    res.duals = arma::zeros(n_cons);

    auto fail = [&](SdpStatus s) {
        res.status = s;
        return res;
    };

    if (inst.trace_cap < 0.0)
        return fail(SdpStatus::Infeasible);

    RowClass cls = classify_rows(inst);
    if (cls.infeasible)
        return fail(SdpStatus::Infeasible);
    for (arma::uword m : cls.face)
        res.eliminated_constraints.push_back(m);

    // Face basis: the joint range of the zero-rhs PSD rows is forced out of
    // W; keep the orthonormal complement.
    arma::cx_mat basis = arma::eye<arma::cx_mat>(dim, dim);
    if (!cls.face.empty()) {
        arma::cx_mat forced = arma::zeros<arma::cx_mat>(dim, dim);
        for (arma::uword m : cls.face)
            forced += inst.constraints[m].matrix / lambda_max_herm(inst.constraints[m].matrix);
        arma::vec ev;
        arma::cx_mat evec;
        arma::eig_sym(ev, evec, forced);
        const double thresh = 1e-10 * std::max(ev.max(), 1.0);
        basis = evec.cols(arma::find(ev <= thresh));
    }
    const arma::uword rdim = basis.n_cols;

    // Degenerate face: W is pinned at zero and only z remains.
    if (inst.trace_cap == 0.0 || rdim == 0) {
        double lo = 0.0, hi = kInf;
        for (arma::uword m : cls.kept)
            if (!intersect_z_interval(inst.constraints[m], lo, hi))
                return fail(SdpStatus::Infeasible);
        if (lo > hi * (1.0 + 1e-12) + 1e-300)
            return fail(SdpStatus::Infeasible);
        if (max_z && !std::isfinite(hi))
            return fail(SdpStatus::NumericalFailure); // unbounded above
        res.z = max_z ? hi : lo;
        res.objective_value = max_z ? res.z : 0.0;
        // Certified multipliers where they exist: the row pinning z from
        // above, and a cap multiplier making the dual matrix PSD when the
        // cap itself is the binding face.
        if (max_z && res.z >= 0.0) {
            for (arma::uword m : cls.kept) {
                const SdpConstraint& c = inst.constraints[m];
                const double sb = sign_of(c.sense) * c.z_coeff;
                if (sb < 0 && std::abs(-c.rhs / c.z_coeff - res.z) <= 1e-12 * (1 + res.z)) {
                    res.duals(m) = -1.0 / sb;
                    break;
                }
            }
        }
        arma::cx_mat m0 = -inst.objective_matrix;
        for (arma::uword m = 0; m < n_cons; ++m)
            m0 += res.duals(m) * sign_of(inst.constraints[m].sense) * inst.constraints[m].matrix;
        if (inst.trace_cap == 0.0)
            res.trace_cap_dual = std::max(0.0, -arma::eig_sym(m0).min());
        res.psd_dual = m0 + res.trace_cap_dual * arma::eye<arma::cx_mat>(dim, dim);
        double z_station = max_z ? -1.0 : 0.0;
        for (arma::uword m = 0; m < n_cons; ++m)
            z_station -= res.duals(m) * sign_of(inst.constraints[m].sense) *
                         inst.constraints[m].z_coeff;
        res.z_dual = z_station;
        double dobj = res.trace_cap_dual * inst.trace_cap;
        for (arma::uword m = 0; m < n_cons; ++m)
            dobj += res.duals(m) * sign_of(inst.constraints[m].sense) * inst.constraints[m].rhs;
        res.gap = dobj - res.objective_value;
        res.status = SdpStatus::Optimal;
        return res;
    }

    // Reduced-space data.
    struct KeptRow {
        arma::uword index;   // position in the instance
        arma::cx_mat matrix; // basis^H A basis
        double z_coeff;
        double sgn;
        double rhs;
    };
    std::vector<KeptRow> rows;
    for (arma::uword m : cls.kept) {
        const SdpConstraint& c = inst.constraints[m];
        KeptRow kr;
        kr.index = m;
        kr.matrix = basis.t() * c.matrix * basis;
        kr.matrix = 0.5 * (kr.matrix + kr.matrix.t());
        kr.z_coeff = c.z_coeff;
        kr.sgn = sign_of(c.sense);
        kr.rhs = c.rhs;
        // a row whose matrix lives entirely in the eliminated span
        if (arma::norm(kr.matrix, "fro") <=
            1e-14 * std::max(1.0, arma::norm(c.matrix, "fro"))) {
            kr.matrix.zeros();
            if (kr.z_coeff == 0.0) {
                const bool ok = c.sense == ConstraintSense::LessEqual ? c.rhs >= 0 : c.rhs <= 0;
                if (!ok)
                    return fail(SdpStatus::Infeasible);
                continue; // vacuous after reduction
            }
        }
        rows.push_back(std::move(kr));
    }
    const arma::cx_mat obj_red = [&] {
        arma::cx_mat g = basis.t() * inst.objective_matrix * basis;
        return arma::cx_mat(0.5 * (g + g.t()));
    }();

    const bool has_z = max_z || std::any_of(rows.begin(), rows.end(),
                                            [](const KeptRow& r) { return r.z_coeff != 0.0; });

    // Diagonal scaling: W in units of the trace cap, z by the geometric
    // mean of the row ratios that couple to it, rows and objective to
    // roughly unit Frobenius size.
    const double w_scale = inst.trace_cap;
    double z_scale = 1.0;
    if (has_z) {
        double acc = 0.0;
        arma::uword cnt = 0;
        for (const KeptRow& r : rows) {
            const double a_norm = arma::norm(r.matrix, "fro");
            if (r.z_coeff != 0.0 && a_norm > 0.0) {
                acc += std::log2(w_scale * a_norm / std::abs(r.z_coeff));
                ++cnt;
            }
        }
        if (cnt > 0)
            z_scale = std::exp2(acc / double(cnt));
    }
    const double obj_norm =
        max_z ? z_scale : w_scale * arma::norm(obj_red, "fro");
    const double obj_scale = 1.0 / std::max(obj_norm, 1e-300);

    const arma::uword n_internal = rows.size() + 1; // + trace cap row
    arma::vec row_scale(n_internal);
    for (arma::uword i = 0; i < rows.size(); ++i)
        row_scale(i) = 1.0 / (w_scale * arma::norm(rows[i].matrix, "fro") +
                              std::abs(rows[i].z_coeff) * z_scale + std::abs(rows[i].rhs));
    row_scale(n_internal - 1) =
        1.0 / (w_scale * std::sqrt(double(rdim)) + inst.trace_cap);

    // Assemble the embedded standard form.
    InternalProblem p;
    p.n = 2 * rdim;
    p.has_z = has_z;
    p.nv = (has_z ? 1 : 0) + n_internal;
    p.rhs.set_size(n_internal);
    p.rows.resize(n_internal);
    for (arma::uword i = 0; i < n_internal; ++i) {
        const bool cap_row = (i == n_internal - 1);
        const double sgn = cap_row ? 1.0 : rows[i].sgn;
        const arma::cx_mat a =
            cap_row ? arma::cx_mat(arma::eye<arma::cx_mat>(rdim, rdim)) : rows[i].matrix;
        const double b = cap_row ? 0.0 : rows[i].z_coeff;
        const double c = cap_row ? inst.trace_cap : rows[i].rhs;
        RowFunc f;
        f.FX = row_scale(i) * sgn * w_scale * 0.5 * embed_herm(a);
        f.fv = arma::zeros(p.nv);
        if (has_z)
            f.fv(0) = -row_scale(i) * sgn * b * z_scale;
        f.fv((has_z ? 1 : 0) + i) = 1.0;
        p.rows[i] = std::move(f);
        p.rhs(i) = row_scale(i) * sgn * c;
    }
    p.C = zeros_like(p.n, p.nv);
    if (max_z) {
        p.C.v(0) = -obj_scale * z_scale;
    } else {
        p.C.X = -obj_scale * w_scale * 0.5 * embed_herm(obj_red);
    }

    const IpmOutput out = run_ipm(p, options.max_iter);
    res.iterations = out.iterations;
    if (out.infeasible_certified)
        return fail(SdpStatus::Infeasible);

    // Map back to the original coordinates.
    const arma::cx_mat w_red = w_scale * unembed_herm(out.Y.X);
    res.W = basis * w_red * basis.t();
    res.W = 0.5 * (res.W + res.W.t());
    res.z = has_z ? z_scale * out.Y.v(0) : 0.0;
    res.objective_value =
        max_z ? res.z : std::real(arma::trace(inst.objective_matrix * res.W));

    for (arma::uword i = 0; i < rows.size(); ++i) {
        const double lam_scaled = std::max(0.0, out.S.v((has_z ? 1 : 0) + i));
        res.duals(rows[i].index) = lam_scaled * row_scale(i) / obj_scale;
    }
    {
        const double lam_scaled = std::max(0.0, out.S.v(p.nv - 1));
        res.trace_cap_dual = lam_scaled * row_scale(n_internal - 1) / obj_scale;
    }

    arma::cx_mat bold = -inst.objective_matrix +
                        res.trace_cap_dual * arma::eye<arma::cx_mat>(dim, dim);
    for (arma::uword m = 0; m < n_cons; ++m)
        bold += res.duals(m) * sign_of(inst.constraints[m].sense) * inst.constraints[m].matrix;
    res.psd_dual = 0.5 * (bold + bold.t());

    double z_station = max_z ? -1.0 : 0.0;
    for (arma::uword m = 0; m < n_cons; ++m)
        z_station -= res.duals(m) * sign_of(inst.constraints[m].sense) *
                     inst.constraints[m].z_coeff;
    res.z_dual = z_station;

    double dobj = res.trace_cap_dual * inst.trace_cap;
    for (arma::uword m = 0; m < n_cons; ++m)
        dobj += res.duals(m) * sign_of(inst.constraints[m].sense) * inst.constraints[m].rhs;
    res.gap = dobj - res.objective_value;

    // Gate on residuals recomputed over the problem the interior point
    // actually certified: the original one, unless facial reduction was in
    // play, in which case exact duals for the eliminated rows may not even
    // exist and the reduced problem carries the certificate.
    SdpInstance gate_inst = inst;
    SdpResult gate_res = res;
    if (rdim != dim) {
        gate_inst.dim = rdim;
        gate_inst.objective_matrix = obj_red;
        gate_inst.constraints.clear();
        for (const KeptRow& r : rows) {
            SdpConstraint c;
            c.matrix = r.matrix;
            c.z_coeff = r.z_coeff;
            c.sense = r.sgn > 0 ? ConstraintSense::LessEqual : ConstraintSense::GreaterEqual;
            c.rhs = r.rhs;
            gate_inst.constraints.push_back(std::move(c));
        }
        gate_res.W = w_red;
        gate_res.duals.set_size(rows.size());
        for (arma::uword i = 0; i < rows.size(); ++i)
            gate_res.duals(i) = res.duals(rows[i].index);
        arma::cx_mat bold_red = -obj_red +
                                res.trace_cap_dual * arma::eye<arma::cx_mat>(rdim, rdim);
        for (arma::uword i = 0; i < rows.size(); ++i)
            bold_red += gate_res.duals(i) * rows[i].sgn * rows[i].matrix;
        gate_res.psd_dual = 0.5 * (bold_red + bold_red.t());
        gate_res.objective_value =
            max_z ? res.z : std::real(arma::trace(obj_red * w_red));
    }
    const SdpResiduals r = residuals(gate_inst, gate_res);
    const bool ok = r.primal_inf <= options.feas_tol && r.dual_inf <= options.feas_tol &&
                    r.comp_slack <= options.comp_tol && r.psd_comp <= options.psd_comp_tol &&
                    r.gap <= 1e-6 * (1.0 + std::abs(res.objective_value));
    res.status = ok ? SdpStatus::Optimal : SdpStatus::NumericalFailure;
    return res;
}

SdpResiduals residuals(const SdpInstance& instance, const SdpResult& result) {
    const SdpInstance inst = sanitized(instance);
    const arma::uword dim = inst.dim;
    const arma::uword n_cons = inst.constraints.size();
    SdpResiduals out;

    const arma::cx_mat& w = result.W;
    const double z = result.z;
    const double tr_w = std::real(arma::trace(w));

    // primal side
    double pinf = std::max(0.0, -z) / (1.0 + std::abs(z));
    if (dim > 0) {
        const double wmin = arma::eig_sym(w).min();
        pinf = std::max(pinf, std::max(0.0, -wmin) / (1.0 + std::abs(tr_w)));
    }
    pinf = std::max(pinf,
                    std::max(0.0, tr_w - inst.trace_cap) / (1.0 + std::abs(inst.trace_cap)));
    arma::vec slack(n_cons);
    for (arma::uword m = 0; m < n_cons; ++m) {
        const SdpConstraint& c = inst.constraints[m];
        const double lhs = std::real(arma::trace(c.matrix * w));
        const double bound = c.z_coeff * z + c.rhs;
        const double viol = sign_of(c.sense) * (lhs - bound);
        slack(m) = std::max(0.0, -viol);
        pinf = std::max(pinf, std::max(0.0, viol) /
                                  (1.0 + std::abs(c.rhs) + std::abs(c.z_coeff * z)));
    }
    out.primal_inf = pinf;

    // dual side: multiplier signs, stationarity in W and z, PSD-ness of the
    // dual matrix
    double dual_scale = 1.0 + result.trace_cap_dual;
    for (arma::uword m = 0; m < n_cons; ++m)
        dual_scale += std::abs(result.duals(m));
    double dinf = std::max(0.0, -result.trace_cap_dual) / dual_scale;
    for (arma::uword m = 0; m < n_cons; ++m)
        dinf = std::max(dinf, std::max(0.0, -result.duals(m)) / dual_scale);

    arma::cx_mat station = -inst.objective_matrix +
                           result.trace_cap_dual * arma::eye<arma::cx_mat>(dim, dim);
    for (arma::uword m = 0; m < n_cons; ++m)
        station += result.duals(m) * sign_of(inst.constraints[m].sense) *
                   inst.constraints[m].matrix;
    const double g_norm = arma::norm(inst.objective_matrix, "fro");
    dinf = std::max(dinf, arma::norm(station - result.psd_dual, "fro") /
                              (1.0 + g_norm + dual_scale));
    if (dim > 0) {
        const double bold_min = arma::eig_sym(result.psd_dual).min();
        dinf = std::max(dinf, std::max(0.0, -bold_min) /
                                  (1.0 + arma::norm(result.psd_dual, "fro")));
    }
    double z_station = inst.objective == SdpObjective::MaximizeZ ? -1.0 : 0.0;
    for (arma::uword m = 0; m < n_cons; ++m)
        z_station -= result.duals(m) * sign_of(inst.constraints[m].sense) *
                     inst.constraints[m].z_coeff;
    dinf = std::max(dinf, std::abs(z_station - result.z_dual) / dual_scale);
    dinf = std::max(dinf, std::max(0.0, -result.z_dual) / dual_scale);
    out.dual_inf = dinf;

    // objectives and gap, recomputed from scratch
    const double pobj = inst.objective == SdpObjective::MaximizeZ
                            ? z
                            : std::real(arma::trace(inst.objective_matrix * w));
    double dobj = result.trace_cap_dual * inst.trace_cap;
    for (arma::uword m = 0; m < n_cons; ++m)
        dobj += result.duals(m) * sign_of(inst.constraints[m].sense) * inst.constraints[m].rhs;
    out.gap = std::abs(dobj - pobj);

    // complementarity
    double comp = result.trace_cap_dual * std::abs(inst.trace_cap - tr_w);
    for (arma::uword m = 0; m < n_cons; ++m)
        comp += std::abs(result.duals(m)) * slack(m);
    comp += std::abs(result.z_dual * z);
    out.comp_slack = comp / (1.0 + std::abs(pobj) + std::abs(dobj));

    const double w_norm = arma::norm(w, "fro");
    out.psd_comp = w_norm > 0 ? arma::norm(result.psd_dual * w, "fro") / w_norm : 0.0;
    return out;
}

SdpInstance real_embedding(const SdpInstance& instance) {
    const SdpInstance inst = sanitized(instance);
    SdpInstance out;
    out.dim = 2 * inst.dim;
    out.objective = inst.objective;
    out.objective_matrix =
        arma::cx_mat(0.5 * embed_herm(inst.objective_matrix), arma::zeros(out.dim, out.dim));
    out.trace_cap = 2.0 * inst.trace_cap;
    for (const SdpConstraint& c : inst.constraints) {
        SdpConstraint e;
        e.matrix = arma::cx_mat(0.5 * embed_herm(c.matrix), arma::zeros(out.dim, out.dim));
        e.z_coeff = c.z_coeff;
        e.sense = c.sense;
        e.rhs = c.rhs;
        out.constraints.push_back(std::move(e));
    }
    return out;
}

void dump_instance(const SdpInstance& instance, std::ostream& out) {
    using nlohmann::json;
    auto matrix_to = [](const arma::cx_mat& a) {
        json rows = json::array();
        for (arma::uword i = 0; i < a.n_rows; ++i) {
            json row = json::array();
            for (arma::uword j = 0; j < a.n_cols; ++j)
                row.push_back(json{{"re", a(i, j).real()}, {"im", a(i, j).imag()}});
            rows.push_back(std::move(row));
        }
        return rows;
    };
    json cons = json::array();
    for (const SdpConstraint& c : instance.constraints)
        cons.push_back(json{
            {"matrix", matrix_to(c.matrix)},
            {"z_coeff", c.z_coeff},
            {"sense", c.sense == ConstraintSense::LessEqual ? "<=" : ">="},
            {"rhs", c.rhs},
        });
    json j{
        {"dim", instance.dim},
        {"objective",
         instance.objective == SdpObjective::MaximizeTrace ? "maximize_trace" : "maximize_z"},
        {"trace_cap", instance.trace_cap},
        {"constraints", std::move(cons)},
    };
    if (instance.objective == SdpObjective::MaximizeTrace)
        j["objective_matrix"] = matrix_to(instance.objective_matrix);
    out << j.dump(2) << '\n';
}

} // namespace beamkit

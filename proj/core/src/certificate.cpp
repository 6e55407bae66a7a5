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

#include "beamkit/certificate.hpp"

namespace beamkit {

DegeneracyFlags detect_degeneracy(const ChannelSet& channels) {
    DegeneracyFlags f;
    const arma::uword k = channels.n_users();
    for (arma::uword i = 0; i < k && !f.orthogonal_pair; ++i)
        for (arma::uword j = i + 1; j < k; ++j) {
            const double cross = std::abs(arma::cdot(channels.primary.col(i),
                                                     channels.primary.col(j)));
            const double scale = arma::norm(channels.primary.col(i)) *
                                 arma::norm(channels.primary.col(j));
            if (cross < 1e-9 * scale) {
                f.orthogonal_pair = true;
                break;
            }
        }

    double max_re = arma::abs(arma::real(channels.primary)).max();
    double max_im = arma::abs(arma::imag(channels.primary)).max();
    if (channels.secondary.n_elem > 0) {
        max_re = std::max(max_re, arma::abs(arma::real(channels.secondary)).max());
        max_im = std::max(max_im, arma::abs(arma::imag(channels.secondary)).max());
    }
    f.real_valued = max_im < 1e-12 * max_re;
    return f;
}

Certificate certify(const SdpInstance& instance, const SdpResult& result,
                    const DegeneracyFlags& flags) {
    const arma::uword dim = instance.dim;

    Certificate cert;
    cert.cap_dual = result.trace_cap_dual;

    // numerical rank of the solved W
    {
        const arma::vec ev = arma::sort(arma::eig_sym(result.W), "descend");
        const double top = std::max(ev(0), 0.0);
        cert.rank_estimate = 0;
        for (arma::uword i = 0; i < ev.n_elem; ++i)
            if (ev(i) > 1e-6 * top && top > 0)
                ++cert.rank_estimate;
    }

    // M = objective part + (>= duals) * matrices - (<= duals) * matrices,
    // so that psd_dual = cap_dual * I - M.
    arma::cx_mat m = instance.objective == SdpObjective::MaximizeTrace
                         ? instance.objective_matrix
                         : arma::zeros<arma::cx_mat>(dim, dim);
    for (arma::uword i = 0; i < instance.constraints.size(); ++i) {
        const SdpConstraint& c = instance.constraints[i];
        const double sgn = c.sense == ConstraintSense::GreaterEqual ? 1.0 : -1.0;
        m += sgn * result.duals(i) * c.matrix;
    }
    m = 0.5 * (m + m.t());

    cert.dual_matrix_eigs = arma::sort(arma::eig_sym(m), "descend");
    const double top = cert.dual_matrix_eigs(0);
    const double second = dim > 1 ? cert.dual_matrix_eigs(1) : 0.0;
    cert.eigen_gap = dim > 1 ? top - second : top;

    const double tol = 1e-6 * std::max({std::abs(top), cert.cap_dual, 1e-12});
    if (dim > 1 && cert.eigen_gap < tol) {
        if (flags.orthogonal_pair)
            cert.classification = CertClass::DegenerateOrthogonal;
        else if (flags.real_valued)
            cert.classification = CertClass::DegenerateRealChannels;
        else
            cert.classification = CertClass::RepeatedEigenvalue;
    } else if (std::abs(top - cert.cap_dual) <= tol &&
               (dim == 1 || second < cert.cap_dual - tol)) {
        cert.classification = CertClass::ProvablyRankOne;
    } else {
        cert.classification = CertClass::Inconclusive;
    }
    return cert;
}

const char* to_string(CertClass c) {
    switch (c) {
    case CertClass::ProvablyRankOne: return "provably_rank_one";
    case CertClass::DegenerateOrthogonal: return "degenerate_orthogonal";
    case CertClass::DegenerateRealChannels: return "degenerate_real_channels";
    case CertClass::RepeatedEigenvalue: return "repeated_eigenvalue";
    case CertClass::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

} // namespace beamkit

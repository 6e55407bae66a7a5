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

#include "beamkit/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <ostream>
#include <thread>

#include "beamkit/strategy_one.hpp"
#include "beamkit/units.hpp"

namespace beamkit {

const std::vector<DeterministicCase>& deterministic_cases() {
    static const std::vector<DeterministicCase> cases = [] {
        const double pi = arma::datum::pi;
        std::vector<DeterministicCase> v;
        // secondary channel halfway between both primaries, reduced budget:
        // scaling the secondary channel's own direction fits under the caps
        v.push_back({0, pi / 4, 27.0, false, {0u}});
        // aligned with the first primary: riding that beam is optimal
        v.push_back({1, pi / 2, 30.0, true, {0b01u}});
        v.push_back({2, pi / 3, 30.0, false, {0b01u}});
        // symmetric case: cancelling at either user is optimal
        v.push_back({3, pi / 4, 30.0, false, {0b01u, 0b10u}});
        v.push_back({4, pi / 6, 30.0, false, {0b10u}});
        // aligned with the second primary: mirror of case 1
        v.push_back({5, 0.0, 30.0, true, {0b10u}});
        return v;
    }();
    return cases;
}

Scenario deterministic_scenario(const DeterministicCase& c, double complex_perturbation) {
    Scenario s;
    s.channels.primary = arma::eye<arma::cx_mat>(2, 2);
    s.channels.secondary = {std::sin(c.theta_rad), std::cos(c.theta_rad)};
    // noise 10 dB below the 1 W legacy power
    s.channels.noise_power_w = 0.1;
    s.power.p_sdma_w = 1.0;
    s.power.p0_w = dbm_to_watts(c.p0_dbm);
    s.qos.targets_bpcu = {1.0, 1.0};
    if (complex_perturbation != 0.0) {
        for (arma::uword a = 0; a < 2; ++a) {
            for (arma::uword u = 0; u < 2; ++u)
                s.channels.primary(a, u) *=
                    std::polar(1.0, complex_perturbation * double(1 + a + 2 * u));
            s.channels.secondary(a) *=
                std::polar(1.0, complex_perturbation * double(3 + 2 * a));
        }
    }
    return s;
}

DeploymentDraw sample_deployment(const DeploymentConfig& config, std::uint64_t trial) {
    Rng rng(derive_seed(config.master_seed, trial));
    const arma::uword k = config.k_users;
    const arma::uword n = config.k_users; // antennas track users
    const double half = 0.5 * config.square_edge_m;
    const double alpha = config.pathloss_exponent;

    DeploymentDraw draw;
    draw.user_positions_m.set_size(2, k);
    draw.distances_m.set_size(k);
    draw.channels.primary.set_size(n, k);
    for (arma::uword u = 0; u < k; ++u) {
        double x = 0.0, y = 0.0, d = 0.0;
        do {
            x = (rng.uniform() - 0.5) * 2.0 * half;
            y = (rng.uniform() - 0.5) * 2.0 * half;
            d = std::hypot(x, y);
        } while (d < config.min_distance_m);
        draw.user_positions_m(0, u) = x;
        draw.user_positions_m(1, u) = y;
        draw.distances_m(u) = d;
        const double amp = std::pow(d, -0.5 * alpha);
        for (arma::uword a = 0; a < n; ++a)
            draw.channels.primary(a, u) = amp * rng.complex_normal();
    }
    const double d0 = std::hypot(config.secondary_x_m, config.secondary_y_m);
    const double amp0 = std::pow(d0, -0.5 * alpha);
    draw.channels.secondary.set_size(n);
    for (arma::uword a = 0; a < n; ++a)
        draw.channels.secondary(a) = amp0 * rng.complex_normal();
    draw.channels.noise_power_w = dbm_to_watts(config.noise_dbm);
    return draw;
}

Scenario deployment_scenario(const DeploymentConfig& config, const DeploymentDraw& draw,
                             double p0_dbm) {
    Scenario s;
    s.channels = draw.channels;
    s.power.p_sdma_w = dbm_to_watts(config.p_sdma_dbm);
    s.power.p0_w = dbm_to_watts(p0_dbm);
    s.qos.targets_bpcu = arma::vec(config.k_users, arma::fill::value(config.rate_target_bpcu));
    return s;
}

std::uint64_t channel_digest(const ChannelSet& channels) {
    // FNV-1a over the raw channel bytes; the generator is bit-exact, so the
    // digest identifies a draw across runs
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    mix(channels.primary.memptr(), channels.primary.n_elem * sizeof(std::complex<double>));
    mix(channels.secondary.memptr(), channels.secondary.n_elem * sizeof(std::complex<double>));
    mix(&channels.noise_power_w, sizeof(double));
    return h;
}

namespace {

TrialRecord run_trial(const DeploymentConfig& config, std::uint64_t trial, double p0_dbm,
                      SicPolicy policy) {
    const DeploymentDraw draw = sample_deployment(config, trial);
    const Scenario scenario = deployment_scenario(config, draw, p0_dbm);

    TrialRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(config.master_seed, trial);
    rec.user_positions_m = draw.user_positions_m;
    rec.channel_digest = channel_digest(scenario.channels);

    const Precoder precoder = zf_precoder(scenario.channels, scenario.power.p_sdma_w);
    const RateContext ctx = build_context(scenario.channels, precoder, scenario.qos);

    const BeamSolution ride = best_rider(scenario.channels, precoder, ctx, scenario.power);
    rec.rate_ride_bpcu = ride.rate_bpcu;
    rec.winning_sic_ride = ride.sic_set.mask();

    const NewBeamSearch search = best_new_beam(scenario.channels, precoder, ctx,
                                               scenario.power, policy, rec.seed);
    rec.new_beam_failed = !search.solution.feasible;
    rec.rate_new_beam_bpcu = search.solution.rate_bpcu;
    rec.winning_sic_new = search.solution.sic_set.mask();
    for (const SdrOutcome& o : search.subsets) {
        if (o.status != SdpStatus::Optimal)
            continue;
        ++rec.subsets_solved;
        if (o.w_rank == 1)
            ++rec.subsets_rank_one;
        rec.certificates.push_back(o.certificate.classification);
    }
    return rec;
}

} // namespace

SweepResult run_sweep(const DeploymentConfig& config, const SweepSpec& spec) {
    if (spec.trials_per_point == 0)
        throw std::invalid_argument("run_sweep: need at least one trial per point");

    SweepResult result;
    for (double value : spec.grid) {
        DeploymentConfig cfg = config;
        double p0_dbm = 0.0;
        if (spec.variable == SweepVariable::P0Grid) {
            p0_dbm = value;
        } else {
            cfg.k_users = arma::uword(value);
            p0_dbm = spec.p0_dbm_for_k_sweep;
        }

        std::vector<TrialRecord> records(spec.trials_per_point);
        const unsigned workers =
            std::max(1u, std::min<unsigned>(spec.threads, std::thread::hardware_concurrency()));
        if (workers <= 1) {
            for (std::uint64_t t = 0; t < spec.trials_per_point; ++t)
                records[t] = run_trial(cfg, t, p0_dbm, spec.policy);
        } else {
            std::atomic<std::uint64_t> next{0};
            auto work = [&] {
                for (std::uint64_t t = next.fetch_add(1); t < spec.trials_per_point;
                     t = next.fetch_add(1))
                    records[t] = run_trial(cfg, t, p0_dbm, spec.policy);
            };
            std::vector<std::thread> pool;
            for (unsigned i = 0; i < workers; ++i)
                pool.emplace_back(work);
            for (auto& th : pool)
                th.join();
        }

        const char* var_name = spec.variable == SweepVariable::P0Grid ? "p0_dbm" : "k";
        for (const char* strategy : {"ride_existing", "new_beam"}) {
            const bool ride = std::strcmp(strategy, "ride_existing") == 0;
            double sum = 0.0, sumsq = 0.0;
            arma::uword n_ok = 0, n_fail = 0;
            arma::uword solved = 0, rank_one = 0;
            for (const TrialRecord& r : records) {
                if (!ride && r.new_beam_failed) {
                    ++n_fail;
                    continue;
                }
                const double rate = ride ? r.rate_ride_bpcu : r.rate_new_beam_bpcu;
                sum += rate;
                sumsq += rate * rate;
                ++n_ok;
                solved += r.subsets_solved;
                rank_one += r.subsets_rank_one;
            }
            SweepRow row;
            row.sweep_var = var_name;
            row.value = value;
            row.strategy = strategy;
            row.n_trials = n_ok;
            row.n_failures = n_fail;
            if (n_ok > 0) {
                row.mean_rate_bpcu = sum / double(n_ok);
                if (n_ok > 1) {
                    const double var =
                        std::max(0.0, (sumsq - sum * sum / double(n_ok)) / double(n_ok - 1));
                    row.stderr_bpcu = std::sqrt(var / double(n_ok));
                }
            }
            row.rank_one_fraction =
                ride ? 1.0 : (solved > 0 ? double(rank_one) / double(solved) : 0.0);
            result.rows.push_back(std::move(row));
        }
        result.trials.push_back(std::move(records));
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "sweep_var,value,strategy,mean_rate_bpcu,stderr,n_trials,n_failures,"
           "rank_one_fraction\n";
    char buf[256];
    for (const SweepRow& r : result.rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%.17g,%.17g,%llu,%llu,%.17g\n",
                      r.sweep_var.c_str(), r.value, r.strategy.c_str(), r.mean_rate_bpcu,
                      r.stderr_bpcu, static_cast<unsigned long long>(r.n_trials),
                      static_cast<unsigned long long>(r.n_failures), r.rank_one_fraction);
        out << buf;
    }
}

} // namespace beamkit

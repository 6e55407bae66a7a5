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
// Command-line front end. Subcommands:
//   solve        both strategies + certificates for one scenario file
//   fig1         the deterministic two-user case table
//   sweep        Monte-Carlo sweep over a budget or user-count grid (CSV)
//   certify      per-subset optimality certificates for one scenario
//   oracle-check solver vs. brute-force grid rates, side by side
//
// Every command writes deterministic output for a fixed (flags, files,
// seed) triple. Randomness flows exclusively from --seed, the
// NOMA_BEAMKIT_SEED environment variable, or the built-in default, in that
// order of precedence.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "beamkit/experiments.hpp"
#include "beamkit/oracle.hpp"
#include "beamkit/scenario_io.hpp"
#include "beamkit/strategy_one.hpp"
#include "beamkit/strategy_two.hpp"
#include "beamkit/units.hpp"

namespace {

using nlohmann::json;
using namespace beamkit;

json complex_vec_to_json(const arma::cx_vec& v) {
    json out = json::array();
    for (arma::uword i = 0; i < v.n_elem; ++i)
        out.push_back(json{{"re", v(i).real()}, {"im", v(i).imag()}});
    return out;
}

// SIC sets in output use 1-based user labels, matching the usual U_1..U_K
// naming of the primary users.
json sic_to_json(const SicSet& s) {
    json out = json::array();
    for (arma::uword i : s.members())
        out.push_back(i + 1);
    return out;
}

json beam_solution_to_json(const BeamSolution& s) {
    return json{
        {"strategy", s.strategy == Strategy::RideExisting ? "ride_existing" : "new_beam"},
        {"rate_bpcu", s.rate_bpcu},
        {"beam", complex_vec_to_json(s.beam)},
        {"beam_power_w", std::pow(arma::norm(s.beam), 2)},
        {"sic_set", sic_to_json(s.sic_set)},
        {"rider_index", s.rider_index ? json(*s.rider_index + 1) : json(nullptr)},
        {"feasible", s.feasible},
    };
}

json certificate_to_json(const Certificate& c) {
    return json{
        {"classification", to_string(c.classification)},
        {"rank_estimate", c.rank_estimate},
        {"cap_dual", c.cap_dual},
        {"eigen_gap", c.eigen_gap},
        {"dual_matrix_eigs", std::vector<double>(c.dual_matrix_eigs.begin(),
                                                 c.dual_matrix_eigs.end())},
    };
}

const char* status_name(SdpStatus s) {
    switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

json subset_to_json(const SdrOutcome& o) {
    return json{
        {"subset", sic_to_json(o.sic_set)},
        {"status", status_name(o.status)},
        {"sdr_value_bpcu", o.sdr_value_bpcu},
        {"rank", o.w_rank},
        {"extraction", o.extraction == ExtractionMethod::Eigenvector ? "eigenvector"
                                                                     : "randomized"},
        {"randomization_samples", o.randomization_samples},
        {"achieved_rate_bpcu", o.achieved_rate_bpcu},
        {"certificate", certificate_to_json(o.certificate)},
    };
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write '" + out_path + "'");
    out << j.dump(2) << '\n';
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write '" + out_path + "'");
    out << text;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag)
        return *flag;
    if (const char* env = std::getenv("NOMA_BEAMKIT_SEED"))
        return std::strtoull(env, nullptr, 10);
    return kDefaultSeed;
}

struct Solved {
    Precoder precoder;
    RateContext ctx;
    BeamSolution ride;
    NewBeamSearch search;
    json warnings = json::array();
};

Solved solve_scenario(const Scenario& s, SicPolicy policy, std::uint64_t seed) {
    Solved r;
    r.precoder = zf_precoder(s.channels, s.power.p_sdma_w);
    r.ctx = build_context(s.channels, r.precoder, s.qos);
    r.ride = best_rider(s.channels, r.precoder, r.ctx, s.power);
    r.search = best_new_beam(s.channels, r.precoder, r.ctx, s.power, policy, seed);
    if (r.ctx.legacy_infeasible())
        r.warnings.push_back("legacy design misses a rate floor on its own "
                             "(zero interference headroom for some user)");
    for (const SdrOutcome& o : r.search.subsets) {
        if (o.status != SdpStatus::Optimal)
            r.warnings.push_back(std::string("subset solve not optimal: status ") +
                                 status_name(o.status));
        else if (o.certificate.classification == CertClass::Inconclusive)
            r.warnings.push_back("inconclusive optimality certificate on one subset");
    }
    return r;
}

int run_solve(const std::string& scenario_path, const std::string& out_path,
              SicPolicy policy, std::uint64_t seed) {
    const Scenario s = load_scenario(scenario_path);
    const Solved r = solve_scenario(s, policy, seed);
    json j{
        {"scenario", scenario_path},
        {"seed", seed},
        {"policy", policy == SicPolicy::FullEnumeration ? "full" : "simplified"},
        {"ride_existing", beam_solution_to_json(r.ride)},
        {"new_beam", beam_solution_to_json(r.search.solution)},
        {"subsets", json::array()},
        {"warnings", r.warnings},
    };
    for (const SdrOutcome& o : r.search.subsets)
        j["subsets"].push_back(subset_to_json(o));
    emit(j, out_path);
    return 0;
}

int run_fig1(std::optional<int> case_id, const std::string& out_path, std::uint64_t seed) {
    json table = json::array();
    for (const DeterministicCase& c : deterministic_cases()) {
        if (case_id && *case_id != c.id)
            continue;
        const Scenario s = deterministic_scenario(c);
        const Solved r = solve_scenario(s, SicPolicy::FullEnumeration, derive_seed(seed, c.id));
        const bool tie = std::abs(r.ride.rate_bpcu - r.search.solution.rate_bpcu) <= 1e-6;
        const BeamSolution& best =
            r.search.solution.rate_bpcu >= r.ride.rate_bpcu - 1e-6 ? r.search.solution : r.ride;
        table.push_back(json{
            {"case", c.id},
            {"theta_rad", c.theta_rad},
            {"p0_dbm", c.p0_dbm},
            {"rate_ride_bpcu", r.ride.rate_bpcu},
            {"rate_new_beam_bpcu", r.search.solution.rate_bpcu},
            {"strategies_tie", tie},
            {"chosen", beam_solution_to_json(best)},
            {"sic_set", sic_to_json(best.sic_set)},
        });
    }
    if (table.empty())
        throw std::runtime_error("unknown case id");
    emit(json{{"cases", table}}, out_path);
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    // "a:b:step" inclusive, or a comma-separated list
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double a = 0, b = 0, step = 1;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw std::runtime_error("bad grid '" + text + "', expected a:b:step");
        for (double v = a; v <= b + 1e-9; v += step)
            grid.push_back(v);
    } else {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ','))
            grid.push_back(std::stod(tok));
    }
    if (grid.empty())
        throw std::runtime_error("empty grid");
    return grid;
}

int run_sweep_cmd(const std::string& variable, const std::string& grid_text,
                  arma::uword trials, SicPolicy policy, std::uint64_t seed, unsigned threads,
                  arma::uword k_users, const std::string& out_path) {
    DeploymentConfig config;
    config.master_seed = seed;
    config.k_users = k_users;

    SweepSpec spec;
    spec.variable = variable == "p0" ? SweepVariable::P0Grid : SweepVariable::KGrid;
    spec.grid = parse_grid(grid_text);
    spec.trials_per_point = trials;
    spec.policy = policy;
    spec.threads = threads;

    const SweepResult result = run_sweep(config, spec);
    std::ostringstream csv;
    write_sweep_csv(result, csv);
    emit_text(csv.str(), out_path);
    return 0;
}

int run_certify(const std::string& scenario_path, const std::string& out_path,
                SicPolicy policy, std::uint64_t seed) {
    const Scenario s = load_scenario(scenario_path);
    const Solved r = solve_scenario(s, policy, seed);
    json subsets = json::array();
    for (const SdrOutcome& o : r.search.subsets)
        subsets.push_back(json{
            {"subset", sic_to_json(o.sic_set)},
            {"status", status_name(o.status)},
            {"certificate", certificate_to_json(o.certificate)},
            {"rank", o.w_rank},
        });
    const DegeneracyFlags flags = detect_degeneracy(s.channels);
    emit(json{
             {"scenario", scenario_path},
             {"degeneracy",
              json{{"orthogonal_pair", flags.orthogonal_pair},
                   {"real_valued", flags.real_valued}}},
             {"subsets", subsets},
         },
         out_path);
    return 0;
}

int run_oracle_check(const std::string& scenario_path, const std::string& out_path,
                     arma::uword resolution, std::uint64_t seed) {
    const Scenario s = load_scenario(scenario_path);
    const Solved r = solve_scenario(s, SicPolicy::FullEnumeration, seed);

    GridResolution res;
    res.n_radial = resolution;
    res.n_phase = std::max<arma::uword>(8, resolution * 9 / 10);

    const bool grid_capable = s.channels.n_antennas() == 2;
    json rows = json::array();
    for (const SdrOutcome& o : r.search.subsets) {
        OracleReport rep =
            grid_capable
                ? grid_oracle_2d(o.sic_set, s.channels, r.precoder, r.ctx, s.power, res)
                : sampling_oracle(o.sic_set, s.channels, r.precoder, r.ctx, s.power, 100000,
                                  derive_seed(seed, 0xA11CE));
        rows.push_back(json{
            {"subset", sic_to_json(o.sic_set)},
            {"solver_rate_bpcu", o.achieved_rate_bpcu},
            {"oracle_rate_bpcu", rep.best_rate_bpcu},
            {"delta_bpcu", o.achieved_rate_bpcu - rep.best_rate_bpcu},
            {"oracle", grid_capable ? "grid" : "sampling_lower_bound"},
        });
    }
    emit(json{
             {"scenario", scenario_path},
             {"resolution", resolution},
             {"new_beam_rate_bpcu", r.search.solution.rate_bpcu},
             {"regimes", rows},
         },
         out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secondary-user beamforming on a zero-forcing SDMA downlink"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, grid_text = "20:30:1", sweep_variable = "p0";
    std::string policy_text = "full";
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> case_id;
    arma::uword trials = 200, oracle_resolution = 200, k_users = 2;
    unsigned threads = 1;

    app.add_option("--seed", seed_flag, "seed for all randomized paths");
    app.add_option("--threads", threads, "worker threads for trials");
    app.add_option("--out", out_path, "output path ('-' = stdout)");

    auto add_policy = [&](CLI::App* cmd) {
        cmd->add_option("--policy", policy_text, "SIC search policy")
            ->check(CLI::IsMember({"full", "simplified"}));
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one scenario, both strategies");
    solve_cmd->add_option("--scenario", scenario_path, "scenario JSON")->required();
    add_policy(solve_cmd);

    CLI::App* fig1_cmd = app.add_subcommand("fig1", "deterministic two-user case table");
    fig1_cmd->add_option("--case", case_id, "case id 0..5 (default: all)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo sweep, CSV output");
    sweep_cmd->add_option("--sweep", sweep_variable, "swept variable")
        ->check(CLI::IsMember({"p0", "k"}));
    sweep_cmd->add_option("--grid", grid_text, "a:b:step or comma list");
    sweep_cmd->add_option("--trials", trials, "trials per grid point");
    sweep_cmd->add_option("--k", k_users, "user count for p0 sweeps");
    add_policy(sweep_cmd);

    CLI::App* certify_cmd = app.add_subcommand("certify", "per-subset certificates");
    certify_cmd->add_option("--scenario", scenario_path, "scenario JSON")->required();
    add_policy(certify_cmd);

    CLI::App* oracle_cmd = app.add_subcommand("oracle-check", "solver vs. grid oracle");
    oracle_cmd->add_option("--scenario", scenario_path, "scenario JSON")->required();
    oracle_cmd->add_option("--oracle-resolution", oracle_resolution, "amplitude grid points");

    CLI11_PARSE(app, argc, argv);

    const std::uint64_t seed = resolve_seed(seed_flag);
    const SicPolicy policy =
        policy_text == "full" ? SicPolicy::FullEnumeration : SicPolicy::Simplified;

    try {
        if (solve_cmd->parsed())
            return run_solve(scenario_path, out_path, policy, seed);
        if (fig1_cmd->parsed())
            return run_fig1(case_id, out_path, seed);
        if (sweep_cmd->parsed())
            return run_sweep_cmd(sweep_variable, grid_text, trials, policy, seed, threads,
                                 k_users, out_path);
        if (certify_cmd->parsed())
            return run_certify(scenario_path, out_path, policy, seed);
        if (oracle_cmd->parsed())
            return run_oracle_check(scenario_path, out_path, oracle_resolution, seed);
    } catch (const std::exception& e) {
        std::cout << nlohmann::json{{"error", e.what()}}.dump(2) << '\n';
        return 1;
    }
    return 1;
}

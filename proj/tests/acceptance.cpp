// SPDX-License-Identifier: Apache-2.0
//
// hynoma - downlink hybrid NOMA power allocation library and simulator
// Copyright (C) 2026 The hynoma Authors
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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "hynoma/experiments.hpp"
#include "hynoma/oracle_verify.hpp"
#include "hynoma/siso_hybrid.hpp"
#include "hynoma/verify_suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace hynoma;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool ok, const std::string &what, const std::string &measured)
{
    std::printf("criterion %2d: %s  %s [%s]\n", id, ok ? "PASS" : "FAIL", what.c_str(), measured.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char *format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

// Every field is a finite number or the literal "inf".
bool csv_is_clean(const CsvTable &table, std::size_t first_numeric)
{
    for (const auto &row : table.rows())
        for (std::size_t i = first_numeric; i < row.size(); ++i)
        {
            if (row[i] == "inf" || row[i].empty())
                continue;
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(row[i], &used);
            }
            catch (const std::exception &)
            {
                return false;
            }
            if (used != row[i].size() || !std::isfinite(v))
                return false;
        }
    return true;
}

std::vector<SisoScenario> criterion1_population()
{
    std::mt19937_64 rng(20240601);
    std::vector<SisoScenario> out;
    for (int n = 0; n < 1000; ++n)
        out.push_back(random_ordered_scenario(rng, 2, 6, 0.5, 6.0));
    return out;
}

} // namespace

int main()
{
    const auto population = criterion1_population();
    double worst_kkt = 0.0;
    bool csv_clean = true;

    {
        const auto start = Clock::now();
        double worst = 0.0;
        for (const auto &s : population)
        {
            const auto h = hybrid_closed_form(s);
            for (std::size_t m = 0; m < s.n_users(); ++m)
                for (std::size_t i = 0; i < m; ++i)
                    worst = std::max(worst, std::abs(h.accumulated_interference(m, i) - h.accumulated_interference(m, m)));
        }
        const double elapsed = seconds_since(start);
        report(1, worst < 1e-9 && elapsed < 5.0, "equal accumulated interference, 1000 ordered scenarios",
               fmt("max deviation %.3g (< 1e-9), %.2f s (< 5 s)", worst, elapsed));
    }

    {
        const auto start = Clock::now();
        std::mt19937_64 rng(777);
        double worst = 0.0;
        for (int n = 0; n < 50; ++n)
        {
            const auto s = random_ordered_scenario(rng, 2 + n % 2, 2 + n % 2, 0.5, 6.0);
            const auto h = hybrid_closed_form(s);
            for (std::size_t m = 0; m < s.n_users(); ++m)
            {
                const double oracle = grid_search_siso_refined(s, m, h.powers(), 120, 2).energy;
                worst = std::max(worst, std::abs(h.per_user_energy()[m] - oracle) / oracle);
            }
        }
        const double elapsed = seconds_since(start);
        report(2, worst < 1e-3 && elapsed < 120.0, "closed form vs grid oracle, M in {2,3}, 50 scenarios",
               fmt("max relative gap %.3g (< 1e-3), %.2f s (< 120 s)", worst, elapsed));
    }

    {
        std::size_t strict = 0;
        for (const auto &s : population)
            if (hybrid_closed_form(s).total_energy() < oma_allocation(s).total_energy())
                ++strict;
        const auto s = SisoScenario::make({2.0, 1.0}, 2.0);
        const double hybrid = hybrid_closed_form(s).per_user_energy()[1];
        const double oma = oma_allocation(s).per_user_energy()[1];
        const bool ok = strict == population.size() && std::abs(hybrid - 5.93982) < 1e-4 && std::abs(oma - 6.38906) < 1e-4;
        report(3, ok, "hybrid < OMA in every instance; two-user reference energies",
               fmt("%.0f/1000 strict, hybrid %.6f, OMA %.6f", double(strict), hybrid, oma));
    }

    {
        std::mt19937_64 rng(4242);
        std::uniform_real_distribution<double> gain(0.01, 10.0), rate(0.5, 6.0);
        double worst = 0.0;
        int draws = 0;
        while (draws < 1000)
        {
            double g1 = gain(rng), g2 = gain(rng);
            if (g1 == g2)
                continue;
            if (g1 < g2)
                std::swap(g1, g2);
            worst = std::max(worst, std::abs(uplink_two_user(g1, g2, rate(rng)).first));
            ++draws;
        }
        report(4, worst < 1e-9, "uplink contrast P21 = 0, 1000 draws", fmt("max |P21| %.3g (< 1e-9)", worst));
    }

    {
        double worst = 0.0;
        for (const auto &s : population)
            worst = std::max(worst,
                             (successive_allocation(s).powers() - hybrid_closed_form(s).powers()).cwiseAbs().maxCoeff());
        report(5, worst < 1e-9, "successive allocation equals closed form entrywise",
               fmt("max deviation %.3g (< 1e-9)", worst));
    }

    {
        ExperimentConfig c;
        c.trials = 10000;
        c.gain_floor = 0.01;
        c.users = 5;
        c.rates = {1, 2, 3, 4, 5};
        c.ordering = "ordered";
        const auto table = run_siso_sweep(c);
        csv_clean = csv_clean && csv_is_clean(table, 0);
        bool below = true, monotone = true;
        double previous = 0.0;
        std::string ratios;
        for (const auto &row : table.rows())
        {
            const double oma = std::stod(row[1]), hybrid = std::stod(row[2]);
            const double ratio = oma / hybrid;
            below = below && hybrid < oma;
            monotone = monotone && ratio >= previous;
            previous = ratio;
            ratios += (ratios.empty() ? "" : " ") + fmt("%.4f", ratio);
        }
        report(6, below && monotone && table.rows().size() == 5, "SISO sweep: hybrid < OMA, OMA/hybrid nondecreasing",
               "ratios " + ratios);
    }

    {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int disagreements = 0, feasible = 0;
        double worst = 0.0;
        for (int n = 0; n < 1000; ++n)
        {
            Eigen::MatrixXd c = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return u(rng); });
            c.diagonal().array() += 0.5;
            LinearPowerControlProblem problem;
            problem.gain_matrix = c;
            problem.sinr_target = 3.0 * u(rng);
            const auto solved = solve_linear_power_control(problem);
            const bool ok = solved.status == SolveStatus::optimal;
            if (ok != spectral_feasibility(c, problem.sinr_target))
                ++disagreements;
            if (!ok)
                continue;
            ++feasible;
            for (Eigen::Index k = 0; k < 3; ++k)
            {
                const double interference = c.row(k).dot(solved.solution) - c(k, k) * solved.solution[k];
                const double sinr = c(k, k) * solved.solution[k] / (interference + 1.0);
                worst = std::max(worst, std::abs(sinr - problem.sinr_target) / std::max(1.0, problem.sinr_target));
            }
        }
        report(7, disagreements == 0 && worst < 1e-10, "OMA power control vs spectral oracle, 1000 K=3 matrices",
               fmt("%.0f disagreements, %.0f feasible, max SINR residual %.3g (< 1e-10)", double(disagreements),
                   double(feasible), worst));
    }

    {
        const auto start = Clock::now();
        ExperimentConfig config;
        config.g1_users = 10;
        config.g2_users = 3;
        std::mt19937_64 rng(31337);
        std::uniform_real_distribution<double> rate(0.5, 6.0);
        double violation = 0.0, rise = 0.0, excess = 0.0;
        int infeasible = 0;
        for (int n = 0; n < 200; ++n)
        {
            const std::size_t antennas = n % 2 == 0 ? 65 : 129;
            const BeamMode mode = (n / 2) % 2 == 0 ? BeamMode::beamfocusing : BeamMode::zero_forcing;
            const auto scenario = random_miso_scenario(config, antennas, mode, rate(rng), rng);
            const auto gains = build_effective_gains(scenario);
            const auto oma = solve_miso_oma(gains, scenario.target_rate);
            const auto hyb = solve_miso_hybrid_sca(gains, scenario.m_users(), scenario.target_rate);
            worst_kkt = std::max(worst_kkt, hyb.max_kkt_residual);
            if (!hyb.feasible())
            {
                ++infeasible;
                continue;
            }
            violation = std::max(violation, -hybrid_constraint_slack(gains, scenario.m_users(), scenario.target_rate,
                                                                     hyb.p, hyb.e));
            for (std::size_t i = 1; i < hyb.sca_trace.size(); ++i)
                rise = std::max(rise, hyb.sca_trace[i] - hyb.sca_trace[i - 1]);
            if (oma.feasible())
                excess = std::max(excess, hyb.energy - oma.energy);
        }
        const double elapsed = seconds_since(start);
        const bool ok = infeasible == 0 && violation <= 1e-8 && rise <= 0.0 && excess <= 1e-6 && elapsed < 300.0;
        report(8, ok, "SCA soundness, 200 near-field instances",
               fmt("violation %.3g (<= 1e-8), trace rise %.3g (<= 0), hybrid-OMA %.3g (<= 1e-6)", violation, rise,
                   excess) +
                   fmt(", %.0f unsolved, %.1f s (< 300 s)", double(infeasible), elapsed));
    }

    {
        ExperimentConfig c;
        c.g1_users = 20;
        c.g2_users = 3;
        c.antennas = {257};
        c.g1_range = 50.0;
        c.p_g1_dbm = 10.0;
        c.rates = {1, 2, 3, 4, 5, 6, 7};

        std::vector<double> oma_bf, hyb_bf, hyb_zf;
        for (BeamMode mode : {BeamMode::beamfocusing, BeamMode::zero_forcing})
        {
            const auto gains = build_effective_gains(deterministic_miso_scenario(c, mode, 0.0));
            for (double r : c.rates)
            {
                const auto hyb = solve_miso_hybrid_sca(gains, c.g1_users, r);
                worst_kkt = std::max(worst_kkt, hyb.max_kkt_residual);
                (mode == BeamMode::beamfocusing ? hyb_bf : hyb_zf).push_back(hyb.feasible() ? hyb.energy : INFINITY);
                if (mode == BeamMode::beamfocusing)
                    oma_bf.push_back(solve_miso_oma(gains, r).energy);
            }
        }
        const bool oma_breaks = std::any_of(oma_bf.begin(), oma_bf.end(), [](double e) { return std::isinf(e); });
        const bool hybrid_finite = std::all_of(hyb_bf.begin(), hyb_bf.end(), [](double e) { return std::isfinite(e); }) &&
                                   std::all_of(hyb_zf.begin(), hyb_zf.end(), [](double e) { return std::isfinite(e); });
        bool increasing = true;
        double worst_gap = 0.0;
        for (std::size_t r = 0; r < hyb_bf.size(); ++r)
        {
            if (r > 0)
                increasing = increasing && hyb_bf[r] > hyb_bf[r - 1] && hyb_zf[r] > hyb_zf[r - 1];
            worst_gap = std::max(worst_gap, std::abs(hyb_bf[r] - hyb_zf[r]) / hyb_zf[r]);
        }
        const auto table = run_miso_det(c);
        csv_clean = csv_clean && csv_is_clean(table, 0);
        const bool ok = oma_breaks && hybrid_finite && increasing && worst_gap < 0.05;
        report(9, ok, "two-group deterministic trends (N=257, r=50 m, M=20, K=3, gain_scale 1e8)",
               std::string("OMA-BF infinite by R=7: ") + (oma_breaks ? "yes" : "no") +
                   ", hybrid finite: " + (hybrid_finite ? "yes" : "no") + ", strictly increasing: " +
                   (increasing ? "yes" : "no") + fmt(", max BF/ZF gap %.3g (< 0.05)", worst_gap));
    }

    report(10, worst_kkt < 1e-6 && csv_clean, "barrier KKT residual on acceptance instances; CSV hygiene",
           fmt("max KKT residual %.3g (< 1e-6), CSV fields finite or inf: ", worst_kkt) +
               (csv_clean ? "yes" : "no"));

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}

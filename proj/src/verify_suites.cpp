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

#include "hynoma/verify_suites.hpp"

#include "hynoma/convex_kernel.hpp"
#include "hynoma/experiments.hpp"
#include "hynoma/miso_hybrid.hpp"
#include "hynoma/oracle_verify.hpp"
#include "hynoma/siso_hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace hynoma
{

SisoScenario random_ordered_scenario(std::mt19937_64 &rng, std::size_t m_min, std::size_t m_max, double r_min,
                                     double r_max)
{
    std::uniform_int_distribution<std::size_t> users(m_min, m_max);
    std::uniform_real_distribution<double> rate(r_min, r_max);
    const std::size_t m = users(rng);
    const double r = rate(rng);
    while (true)
    {
        std::vector<double> gains = sample_rayleigh_gains(m, 0.01, rng());
        std::sort(gains.begin(), gains.end(), std::greater<>());
        if (is_strictly_decreasing(gains))
            return SisoScenario::make(std::move(gains), r);
    }
}

namespace
{

struct Tracker
{
    PropertyResult result;

    Tracker(const std::string &suite, const std::string &property, double tolerance)
    {
        result.suite = suite;
        result.property = property;
        result.tolerance = tolerance;
    }

    void observe(double deviation)
    {
        ++result.instances;
        result.max_deviation = std::max(result.max_deviation, deviation);
    }

    // Deviation must stay strictly below the tolerance.
    PropertyResult below() const
    {
        PropertyResult r = result;
        r.passed = r.instances > 0 && r.max_deviation < r.tolerance;
        return r;
    }

    // Deviation is a violation count; zero passes.
    PropertyResult none() const
    {
        PropertyResult r = result;
        r.passed = r.instances > 0 && r.max_deviation == 0.0;
        return r;
    }
};

std::size_t count_or(const VerifyOptions &options, std::size_t fallback)
{
    return options.instances != 0 ? options.instances : fallback;
}

std::mt19937_64 suite_rng(const VerifyOptions &options, std::uint64_t salt)
{
    return std::mt19937_64(trial_seed(options.seed, salt));
}

std::vector<PropertyResult> suite_equal_interference(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 2);
    Tracker equal("equal_interference", "accumulated_interference_equal", 1e-9);
    Tracker tight("equal_interference", "rate_tightness", 1e-8);
    for (std::size_t n = count_or(options, 1000); n > 0; --n)
    {
        const auto scenario = random_ordered_scenario(rng, 2, 6, 0.5, 6.0);
        const auto schedule = hybrid_closed_form(scenario);
        double worst = 0.0;
        for (std::size_t m = 1; m < scenario.n_users(); ++m)
            for (std::size_t i = 0; i < m; ++i)
                worst = std::max(worst, std::abs(schedule.accumulated_interference(m, i) - schedule.power(m, m)));
        equal.observe(worst);

        double rate_gap = 0.0;
        for (double total : rate_breakdown(schedule).totals)
            rate_gap = std::max(rate_gap, std::abs(total - scenario.target_rate));
        tight.observe(rate_gap);
    }
    return {equal.below(), tight.below()};
}

std::vector<PropertyResult> suite_equal_power(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 3);
    Tracker equal("equal_power", "equal_shared_slot_powers", 1e-9);
    for (std::size_t n = count_or(options, 1000); n > 0; --n)
    {
        const auto schedule = hybrid_closed_form(random_ordered_scenario(rng, 2, 6, 0.5, 6.0));
        double worst = 0.0;
        for (std::size_t m = 2; m < schedule.n_users(); ++m)
            for (std::size_t i = 1; i < m; ++i)
                worst = std::max(worst, std::abs(schedule.power(m, i) - schedule.power(m, 0)));
        equal.observe(worst);
    }
    return {equal.below()};
}

std::vector<PropertyResult> suite_positivity(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 4);
    Tracker positive("positivity", "nonpositive_entries", 0.0);
    for (std::size_t n = count_or(options, 1000); n > 0; --n)
    {
        const auto schedule = hybrid_closed_form(random_ordered_scenario(rng, 2, 6, 0.5, 6.0));
        double bad = 0.0;
        for (std::size_t m = 0; m < schedule.n_users(); ++m)
            for (std::size_t i = 0; i <= m; ++i)
                if (!(schedule.power(m, i) > 0.0))
                    bad += 1.0;
        positive.observe(bad);
    }
    return {positive.none()};
}

std::vector<PropertyResult> suite_hybrid_beats_oma(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 2);
    Tracker ratio("hybrid_beats_oma", "hybrid_over_oma_energy", 1.0);
    for (std::size_t n = count_or(options, 1000); n > 0; --n)
    {
        const auto scenario = random_ordered_scenario(rng, 2, 6, 0.5, 6.0);
        ratio.observe(hybrid_closed_form(scenario).total_energy() / oma_allocation(scenario).total_energy());
    }
    return {ratio.below()};
}

std::vector<PropertyResult> suite_uplink(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 5);
    std::uniform_real_distribution<double> gain(0.01, 10.0), rate(0.01, 8.0);
    Tracker zero("uplink", "p21_zero", 1e-9);
    Tracker oma("uplink", "p22_equals_oma_relative", 1e-9);
    for (std::size_t n = count_or(options, 1000); n > 0; --n)
    {
        double g1 = gain(rng), g2 = gain(rng);
        if (g1 < g2)
            std::swap(g1, g2);
        if (!(g1 > g2))
            continue;
        const double r = rate(rng);
        const auto [p21, p22] = uplink_two_user(g1, g2, r);
        const double expected = std::expm1(r) / g2;
        zero.observe(std::abs(p21));
        oma.observe(std::abs(p22 - expected) / expected);
    }
    return {zero.below(), oma.below()};
}

std::vector<PropertyResult> suite_successive(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 6);
    Tracker agree("successive", "matches_closed_form", 1e-9);
    Tracker below_oma("successive", "unordered_user_energy_over_oma", 1.0 + 1e-12);
    for (std::size_t n = count_or(options, 1000); n > 0; --n)
    {
        const auto scenario = random_ordered_scenario(rng, 2, 6, 0.5, 6.0);
        const auto closed = hybrid_closed_form(scenario);
        const auto successive = successive_allocation(scenario);
        agree.observe((closed.powers() - successive.powers()).cwiseAbs().maxCoeff());

        // Same gains in a shuffled order: every user still spends no more than under OMA.
        std::vector<double> shuffled = scenario.gains;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto unordered = SisoScenario::make(shuffled, scenario.target_rate);
        const auto schedule = successive_allocation(unordered);
        const auto oma = oma_allocation(unordered);
        for (std::size_t m = 0; m < unordered.n_users(); ++m)
            below_oma.observe(schedule.per_user_energy()[m] / oma.per_user_energy()[m]);
    }
    return {agree.below(), below_oma.below()};
}

std::vector<PropertyResult> suite_oracle(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 7);
    Tracker gap("oracle", "closed_form_vs_grid_relative", 1e-3);
    const std::size_t count = count_or(options, 50);
    for (std::size_t n = 0; n < count; ++n)
    {
        const std::size_t m_users = n % 2 == 0 ? 2 : 3;
        const auto scenario = random_ordered_scenario(rng, m_users, m_users, 0.5, 6.0);
        const auto schedule = hybrid_closed_form(scenario);
        for (std::size_t m = 0; m < m_users; ++m)
        {
            const double claimed = schedule.per_user_energy()[m] * (1.0 + options.perturb);
            const double oracle = grid_search_siso_refined(scenario, m, schedule.powers()).energy;
            gap.observe(std::abs(claimed - oracle) / oracle);
        }
    }
    return {gap.below()};
}

GridSpec pareto_grid(const Eigen::MatrixXd &candidate, std::size_t points)
{
    const double e2 = candidate(1, 0) + candidate(1, 1);
    GridSpec grid;
    grid.axes.push_back({0.0, 1.05 * candidate(0, 0), 1.05 * candidate(0, 0) / double(points - 1)});
    grid.axes.push_back({0.0, 1.05 * e2, 1.05 * e2 / double(points - 1)});
    grid.axes.push_back({0.0, 1.05 * e2, 1.05 * e2 / double(points - 1)});
    return grid;
}

std::vector<PropertyResult> suite_pareto(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 8);
    Tracker hybrid_ok("pareto", "hybrid_dominated_count", 0.0);
    Tracker oma_dominated("pareto", "oma_not_dominated_count", 0.0);
    const std::size_t points = 150;
    const std::size_t count = count_or(options, 6);
    for (std::size_t n = 0; n < count; ++n)
    {
        const auto scenario = n == 0 ? SisoScenario::make({2.0, 1.0}, 2.0) : random_ordered_scenario(rng, 2, 2, 0.5, 4.0);
        const auto hybrid = hybrid_closed_form(scenario);
        const auto oma = oma_allocation(scenario);

        hybrid_ok.observe(pareto_scan_two_user(scenario, hybrid.powers(), pareto_grid(hybrid.powers(), points)).dominated
                              ? 1.0
                              : 0.0);

        // Only meaningful when the hybrid saving exceeds the grid tolerance of the OMA scan.
        const GridSpec grid = pareto_grid(oma.powers(), points);
        const double saving = oma.per_user_energy()[1] - hybrid.per_user_energy()[1];
        if (saving > 3.0 * scenario.slot_duration * grid.step_sum())
            oma_dominated.observe(pareto_scan_two_user(scenario, oma.powers(), grid).dominated ? 0.0 : 1.0);
    }
    return {hybrid_ok.none(), oma_dominated.none()};
}

std::vector<PropertyResult> suite_lpc(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 9);
    std::uniform_real_distribution<double> diag(0.5, 2.0), off(0.0, 0.6), rate(0.05, 1.5), bump(0.0, 0.2);
    std::uniform_int_distribution<int> pick(0, 2);
    Tracker agree("lpc", "status_disagreements", 0.0);
    Tracker tight("lpc", "sinr_residual", 1e-10);
    Tracker monotone("lpc", "monotonicity_violation", 1e-12);
    for (std::size_t n = count_or(options, 1000); n > 0; --n)
    {
        LinearPowerControlProblem problem;
        problem.gain_matrix.resize(3, 3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                problem.gain_matrix(r, c) = r == c ? diag(rng) : off(rng);
        problem.sinr_target = std::expm1(rate(rng));

        const SolveReport report = solve_linear_power_control(problem);
        const bool solver_feasible = report.status == SolveStatus::optimal;
        agree.observe(solver_feasible == spectral_feasibility(problem.gain_matrix, problem.sinr_target) ? 0.0 : 1.0);
        if (!solver_feasible)
            continue;

        const Eigen::MatrixXd &c = problem.gain_matrix;
        const Eigen::VectorXd &p = report.solution;
        double worst = 0.0;
        for (int k = 0; k < 3; ++k)
        {
            double interference = 1.0;
            for (int i = 0; i < 3; ++i)
                if (i != k)
                    interference += c(k, i) * p[i];
            worst = std::max(worst, std::abs(c(k, k) * p[k] / interference - problem.sinr_target));
        }
        tight.observe(worst);

        int r = pick(rng), col = pick(rng);
        if (r == col)
            col = (col + 1) % 3;
        LinearPowerControlProblem bumped = problem;
        bumped.gain_matrix(r, col) += bump(rng);
        const SolveReport after = solve_linear_power_control(bumped);
        if (after.status == SolveStatus::optimal)
            monotone.observe(std::max(0.0, ((p - after.solution).array() / p.array()).maxCoeff()));
    }
    return {agree.none(), tight.below(), monotone.below()};
}

std::vector<PropertyResult> suite_sca(const VerifyOptions &options)
{
    auto rng = suite_rng(options, 10);
    std::uniform_real_distribution<double> rate(0.5, 6.0);
    ExperimentConfig config;
    config.g1_users = 10;
    config.g2_users = 3;
    config.gain_scale = 1e8;

    Tracker feasible("sca", "constraint_violation", 1e-8);
    Tracker trace("sca", "trace_increase", 1e-12);
    Tracker dominance("sca", "hybrid_minus_oma_energy", 1e-6);
    Tracker kkt("sca", "barrier_kkt_residual", 1e-6);
    Tracker beyond("sca", "infinite_beyond_oma_ceiling", 0.0);
    const std::size_t count = count_or(options, 20);
    for (std::size_t n = 0; n < count; ++n)
    {
        const std::size_t antennas = n % 2 == 0 ? 65 : 129;
        const BeamMode mode = (n / 2) % 2 == 0 ? BeamMode::beamfocusing : BeamMode::zero_forcing;
        const MisoScenario scenario = random_miso_scenario(config, antennas, mode, rate(rng), rng);
        const EffectiveGains gains = build_effective_gains(scenario);
        const auto oma = solve_miso_oma(gains, scenario.target_rate);
        const auto hybrid = solve_miso_hybrid_sca(gains, scenario.m_users(), scenario.target_rate);

        if (!hybrid.feasible())
        {
            beyond.observe(1.0);
            continue;
        }
        if (!oma.feasible())
            beyond.observe(std::isfinite(hybrid.energy) ? 0.0 : 1.0);
        feasible.observe(std::max(0.0, -hybrid_constraint_slack(gains, scenario.m_users(), scenario.target_rate,
                                                                hybrid.p, hybrid.e)));
        double rise = 0.0;
        for (std::size_t i = 1; i < hybrid.sca_trace.size(); ++i)
            rise = std::max(rise, hybrid.sca_trace[i] - hybrid.sca_trace[i - 1]);
        trace.observe(rise);
        if (oma.feasible())
            dominance.observe(std::max(0.0, hybrid.energy - oma.energy));
        kkt.observe(hybrid.max_kkt_residual);
    }
    PropertyResult beyond_result = beyond.none();
    if (beyond_result.instances == 0)
        beyond_result.passed = true; // no instance crossed the OMA ceiling
    return {feasible.below(), trace.below(), dominance.below(), kkt.below(), beyond_result};
}

using SuiteFn = std::function<std::vector<PropertyResult>(const VerifyOptions &)>;

const std::vector<std::pair<std::string, SuiteFn>> &suites()
{
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"equal_interference", suite_equal_interference},
        {"equal_power", suite_equal_power},
        {"positivity", suite_positivity},
        {"hybrid_beats_oma", suite_hybrid_beats_oma},
        {"uplink", suite_uplink},
        {"successive", suite_successive},
        {"oracle", suite_oracle},
        {"pareto", suite_pareto},
        {"lpc", suite_lpc},
        {"sca", suite_sca}};
    return table;
}

} // namespace

const std::vector<std::string> &verify_suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &entry : suites())
            out.push_back(entry.first);
        return out;
    }();
    return names;
}

std::vector<PropertyResult> run_verify_suite(const std::string &suite, const VerifyOptions &options)
{
    std::vector<PropertyResult> out;
    for (const auto &[name, fn] : suites())
        if (suite == "all" || suite == name)
        {
            auto part = fn(options);
            out.insert(out.end(), part.begin(), part.end());
        }
    if (out.empty())
        throw std::invalid_argument("unknown verify suite '" + suite + "'");
    return out;
}

CsvTable verify_table(const std::vector<PropertyResult> &results)
{
    CsvTable table({"suite", "property", "instances", "max_deviation", "tolerance", "status"});
    for (const auto &r : results)
        table.add_row({r.suite, r.property, std::to_string(r.instances), format_number(r.max_deviation),
                       format_number(r.tolerance), r.passed ? "pass" : "fail"});
    return table;
}

} // namespace hynoma

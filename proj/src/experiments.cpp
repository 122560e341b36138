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

#include "hynoma/experiments.hpp"

#include "hynoma/oracle_verify.hpp"
#include "hynoma/siso_hybrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

namespace hynoma
{

namespace
{

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial)
{
    // Mixing the seed first: with a raw XOR, seeds 1 and 2 over trials 0..4n-1 give the same
    // set of streams in a different order, hence identical averages.
    return splitmix64(splitmix64(seed) ^ trial);
}

double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 8)
    {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MeanEstimate mean_estimate(std::span<const double> values)
{
    MeanEstimate out;
    out.count = values.size();
    if (values.empty())
    {
        out.mean = std::numeric_limits<double>::infinity();
        return out;
    }
    const double n = static_cast<double>(values.size());
    out.mean = pairwise_sum(values) / n;
    if (values.size() > 1)
    {
        std::vector<double> squares(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            squares[i] = (values[i] - out.mean) * (values[i] - out.mean);
        out.standard_error = std::sqrt(pairwise_sum(squares) / (n - 1.0) / n);
    }
    return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body)
{
    const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    return;
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

std::vector<double> deterministic_g1_angles(std::size_t m_users)
{
    const double spacing = std::numbers::pi / (2.0 * static_cast<double>(m_users));
    std::vector<double> out(m_users);
    for (std::size_t m = 0; m < m_users; ++m)
        out[m] = (static_cast<double>(m) - 0.5 * static_cast<double>(m_users - 1)) * spacing;
    return out;
}

namespace
{

MisoScenario base_scenario(const ExperimentConfig &config, std::size_t n_antennas, BeamMode mode, double rate)
{
    MisoScenario s;
    s.geometry = NearFieldGeometry::ula_at_frequency(n_antennas, config.carrier_ghz * 1e9);
    s.p_g1 = dbm_to_linear(config.p_g1_dbm);
    s.target_rate = rate;
    s.beam_mode = mode;
    s.gain_scale = config.gain_scale;
    return s;
}

std::string mode_label(BeamMode mode)
{
    return to_string(mode);
}

// Wraps unexpected solver exceptions so the CLI can tell them apart from config errors.
template <typename Fn> auto guarded(const char *what, std::size_t trial, Fn &&fn)
{
    try
    {
        return fn();
    }
    catch (const std::exception &e)
    {
        throw SolverFailure(std::string(what) + " failed in trial " + std::to_string(trial) + ": " + e.what());
    }
}

} // namespace

MisoScenario deterministic_miso_scenario(const ExperimentConfig &config, BeamMode mode, double rate)
{
    MisoScenario s = base_scenario(config, static_cast<std::size_t>(config.antennas.at(0)), mode, rate);
    const auto angles = deterministic_g1_angles(config.g1_users);
    for (double theta : angles)
        s.g1_positions.emplace_back(theta, config.g1_range);
    for (std::size_t k = 0; k < config.g2_users; ++k)
        s.g2_positions.emplace_back(angles[k], config.g2_range);
    return s;
}

MisoScenario random_miso_scenario(const ExperimentConfig &config, std::size_t n_antennas, BeamMode mode, double rate,
                                  std::mt19937_64 &rng)
{
    MisoScenario s = base_scenario(config, n_antennas, mode, rate);
    const double half_pi = 0.5 * std::numbers::pi;
    std::uniform_real_distribution<double> area(config.g1_range_min * config.g1_range_min,
                                                config.g1_range_max * config.g1_range_max);
    std::uniform_real_distribution<double> angle(-half_pi, half_pi);
    for (std::size_t m = 0; m < config.g1_users; ++m)
    {
        double theta = angle(rng);
        while (!(std::abs(theta) < half_pi))
            theta = angle(rng);
        s.g1_positions.emplace_back(theta, std::sqrt(area(rng)));
    }

    const double span = config.g2_angle_span_deg * std::numbers::pi / 180.0;
    const std::size_t k_users = config.g2_users;
    for (std::size_t k = 0; k < k_users; ++k)
    {
        const double theta =
            k_users == 1 ? 0.0 : -span + 2.0 * span * static_cast<double>(k) / static_cast<double>(k_users - 1);
        s.g2_positions.emplace_back(theta, config.g2_range);
    }
    return s;
}

std::vector<BeamMode> configured_modes(const ExperimentConfig &config)
{
    if (config.beam_mode == "both")
        return {BeamMode::beamfocusing, BeamMode::zero_forcing};
    return {beam_mode_from_string(config.beam_mode)};
}

MisoComparison solve_miso_pair(const MisoScenario &scenario)
{
    const EffectiveGains gains = build_effective_gains(scenario);
    MisoComparison out;
    out.oma = solve_miso_oma(gains, scenario.target_rate);
    out.hybrid = solve_miso_hybrid_sca(gains, scenario.m_users(), scenario.target_rate);
    return out;
}

// ---------------------------------------------------------------------------------------------

CsvTable run_siso_sweep(const ExperimentConfig &config)
{
    validate_config(config, "siso-sweep");
    const std::size_t n_rates = config.rates.size();
    const std::size_t trials = config.trials;
    std::vector<std::vector<double>> oma(n_rates, std::vector<double>(trials));
    std::vector<std::vector<double>> hybrid(n_rates, std::vector<double>(trials));

    parallel_for(trials, [&](std::size_t trial) {
        std::vector<double> gains = sample_rayleigh_gains(config.users, config.gain_floor, trial_seed(config.seed, trial));
        if (config.ordered())
            std::sort(gains.begin(), gains.end(), std::greater<>());
        for (std::size_t r = 0; r < n_rates; ++r)
        {
            const auto scenario = SisoScenario::make(gains, config.rates[r], config.slot_duration);
            guarded("SISO allocation", trial, [&] {
                oma[r][trial] = oma_allocation(scenario).total_energy();
                hybrid[r][trial] = (scenario.ordered ? hybrid_closed_form(scenario) : successive_allocation(scenario))
                                       .total_energy();
                return 0;
            });
        }
    });

    CsvTable table({"rate", "mean_energy_oma", "mean_energy_hybrid", "trials", "stderr_oma", "stderr_hybrid",
                    "ratio_oma_hybrid"});
    for (std::size_t r = 0; r < n_rates; ++r)
    {
        const auto o = mean_estimate(oma[r]);
        const auto h = mean_estimate(hybrid[r]);
        const double ratio = h.mean > 0.0 ? o.mean / h.mean : 1.0;
        table.add_row({format_number(config.rates[r]), format_number(o.mean), format_number(h.mean),
                       std::to_string(trials), format_number(o.standard_error), format_number(h.standard_error),
                       format_number(ratio)});
    }
    return table;
}

CsvTable run_siso_det(const ExperimentConfig &config)
{
    validate_config(config, "siso-det");
    std::vector<double> labelled = config.gains;
    if (labelled.empty())
        for (double h : config.channel_amplitudes)
            labelled.push_back(h * h);

    // Strongest user first internally; `label[u]` is the 1-based index in the configured list.
    std::vector<std::size_t> label(labelled.size());
    std::iota(label.begin(), label.end(), 0);
    std::stable_sort(label.begin(), label.end(), [&](std::size_t a, std::size_t b) { return labelled[a] > labelled[b]; });
    std::vector<double> gains;
    for (auto idx : label)
        gains.push_back(labelled[idx]);
    const std::size_t m_users = gains.size();

    CsvTable table({"rate", "user", "input_user", "slot", "input_slot", "gain", "power", "accumulated_interference",
                    "user_energy", "user_energy_oma", "user_energy_oracle"});
    for (double rate : config.rates)
    {
        const auto scenario = SisoScenario::make(gains, rate, config.slot_duration);
        const AllocationSchedule schedule = guarded("SISO allocation", 0, [&] {
            return scenario.ordered ? hybrid_closed_form(scenario) : successive_allocation(scenario);
        });
        const AllocationSchedule oma = oma_allocation(scenario);

        std::vector<std::string> oracle(m_users);
        if (m_users <= 3 && rate > 0.0)
            for (std::size_t m = 0; m < m_users; ++m)
                oracle[m] = format_number(
                    grid_search_siso_refined(scenario, m, schedule.powers()).energy);

        for (std::size_t m = 0; m < m_users; ++m)
            for (std::size_t i = 0; i <= m; ++i)
                table.add_row({format_number(rate), std::to_string(m + 1), std::to_string(label[m] + 1),
                               std::to_string(i + 1), std::to_string(label[i] + 1), format_number(gains[m]),
                               format_number(schedule.power(m, i)),
                               format_number(schedule.accumulated_interference(m, i)),
                               format_number(schedule.per_user_energy()[m]), format_number(oma.per_user_energy()[m]),
                               oracle[m]});
    }
    return table;
}

CsvTable run_miso_sweep(const ExperimentConfig &config)
{
    validate_config(config, "miso-sweep");
    const bool by_rate = config.sweep == "rate";
    const std::vector<double> &axis = by_rate ? config.rates : config.antennas;
    const auto modes = configured_modes(config);
    const std::size_t trials = config.trials;

    CsvTable table({by_rate ? "rate" : "antennas", "beam_mode", "mean_energy_oma", "mean_energy_hybrid",
                    "infeasible_count_oma", "infeasible_count_hybrid", "trials", "stderr_oma", "stderr_hybrid"});
    for (double x : axis)
    {
        const double rate = by_rate ? x : config.rates.at(0);
        const auto n_antennas = static_cast<std::size_t>(by_rate ? config.antennas.at(0) : x);
        for (BeamMode mode : modes)
        {
            std::vector<double> oma(trials), hybrid(trials);
            parallel_for(trials, [&](std::size_t trial) {
                std::mt19937_64 rng(trial_seed(config.seed, trial));
                const auto scenario = random_miso_scenario(config, n_antennas, mode, rate, rng);
                const auto pair = guarded("MISO allocation", trial, [&] { return solve_miso_pair(scenario); });
                oma[trial] = pair.oma.energy;
                hybrid[trial] = pair.hybrid.energy;
            });

            std::vector<double> oma_ok, hybrid_ok;
            for (double v : oma)
                if (std::isfinite(v))
                    oma_ok.push_back(v);
            for (double v : hybrid)
                if (std::isfinite(v))
                    hybrid_ok.push_back(v);
            const auto o = mean_estimate(oma_ok);
            const auto h = mean_estimate(hybrid_ok);
            table.add_row({format_number(x), mode_label(mode), format_number(o.mean), format_number(h.mean),
                           std::to_string(trials - oma_ok.size()), std::to_string(trials - hybrid_ok.size()),
                           std::to_string(trials), format_number(o.standard_error),
                           format_number(h.standard_error)});
        }
    }
    return table;
}

CsvTable run_miso_det(const ExperimentConfig &config)
{
    validate_config(config, "miso-det");
    const std::size_t n_rates = config.rates.size();
    // Columns per rate: oma_bf, hybrid_bf, oma_zf, hybrid_zf.
    std::vector<std::array<double, 4>> energy(n_rates);

    for (int col = 0; col < 2; ++col)
    {
        const BeamMode mode = col == 0 ? BeamMode::beamfocusing : BeamMode::zero_forcing;
        const MisoScenario scenario = deterministic_miso_scenario(config, mode, 0.0);
        const EffectiveGains gains =
            guarded("beam construction", 0, [&] { return build_effective_gains(scenario); });
        parallel_for(n_rates, [&](std::size_t r) {
            guarded("MISO allocation", r, [&] {
                energy[r][2 * col] = solve_miso_oma(gains, config.rates[r]).energy;
                energy[r][2 * col + 1] = solve_miso_hybrid_sca(gains, scenario.m_users(), config.rates[r]).energy;
                return 0;
            });
        });
    }

    CsvTable table({"rate", "oma_bf", "hybrid_bf", "oma_zf", "hybrid_zf"});
    for (std::size_t r = 0; r < n_rates; ++r)
        table.add_row({format_number(config.rates[r]), format_number(energy[r][0]), format_number(energy[r][1]),
                       format_number(energy[r][2]), format_number(energy[r][3])});
    return table;
}

} // namespace hynoma

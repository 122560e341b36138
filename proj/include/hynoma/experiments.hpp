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

#ifndef HYNOMA_EXPERIMENTS_HPP
#define HYNOMA_EXPERIMENTS_HPP

#include "hynoma/config.hpp"
#include "hynoma/csv.hpp"
#include "hynoma/miso_hybrid.hpp"
#include "hynoma/miso_nearfield.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace hynoma
{

/// Raised when a solver fails in a way that is not a property of the scenario (exit code 3).
class SolverFailure : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Per-trial RNG seed: splitmix64(splitmix64(seed) ^ trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

/// Pairwise summation, so aggregates do not depend on thread scheduling.
double pairwise_sum(std::span<const double> values);

struct MeanEstimate
{
    double mean = 0.0;
    double standard_error = 0.0; // jackknife, equal to s / sqrt(n) for the mean
    std::size_t count = 0;
};

/// Empty input gives mean = +inf (nothing feasible to average).
MeanEstimate mean_estimate(std::span<const double> values);

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads. Rethrows the first
/// exception after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

/// G1 angles of the deterministic two-group scenario: spacing pi/(2M), centred on broadside.
std::vector<double> deterministic_g1_angles(std::size_t m_users);

/// Deterministic two-group scenario from the config (antennas[0], g1_range, g2_range).
MisoScenario deterministic_miso_scenario(const ExperimentConfig &config, BeamMode mode, double rate);

/// G1 users area-uniform over the half ring [g1_range_min, g1_range_max]; G2 users at g2_range with
/// angles equally spaced over +-g2_angle_span_deg.
MisoScenario random_miso_scenario(const ExperimentConfig &config, std::size_t n_antennas, BeamMode mode, double rate,
                                  std::mt19937_64 &rng);

std::vector<BeamMode> configured_modes(const ExperimentConfig &config);

struct MisoComparison
{
    MisoAllocation oma;
    MisoAllocation hybrid;
};

MisoComparison solve_miso_pair(const MisoScenario &scenario);

CsvTable run_siso_sweep(const ExperimentConfig &config);
CsvTable run_siso_det(const ExperimentConfig &config);
CsvTable run_miso_sweep(const ExperimentConfig &config);
CsvTable run_miso_det(const ExperimentConfig &config);

} // namespace hynoma

#endif

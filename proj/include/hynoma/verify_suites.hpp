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

#ifndef HYNOMA_VERIFY_SUITES_HPP
#define HYNOMA_VERIFY_SUITES_HPP

#include "hynoma/channel_models.hpp"
#include "hynoma/csv.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hynoma
{

struct PropertyResult
{
    std::string suite;
    std::string property;
    std::size_t instances = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct VerifyOptions
{
    std::uint64_t seed = 1;
    std::size_t instances = 0; // 0: suite default
    double perturb = 0.0;      // oracle suite only: inflate the closed form by this fraction
};

/// equal_interference, equal_power, positivity, hybrid_beats_oma, uplink, successive, oracle, pareto, lpc, sca.
const std::vector<std::string> &verify_suite_names();

/// Runs one suite, or every suite for "all". Throws std::invalid_argument for an unknown name.
std::vector<PropertyResult> run_verify_suite(const std::string &suite, const VerifyOptions &options);

/// Columns suite, property, instances, max_deviation, tolerance, status.
CsvTable verify_table(const std::vector<PropertyResult> &results);

/// Ordered scenario drawn like the property suites: M uniform in [m_min, m_max], R uniform in
/// [r_min, r_max], gains sorted Exp(1) draws with floor 0.01.
SisoScenario random_ordered_scenario(std::mt19937_64 &rng, std::size_t m_min, std::size_t m_max, double r_min,
                                     double r_max);

} // namespace hynoma

#endif

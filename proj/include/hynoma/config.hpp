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

#ifndef HYNOMA_CONFIG_HPP
#define HYNOMA_CONFIG_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hynoma
{

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Every field below is settable from a config file line `key = value` or the flag `--key value`.
struct ExperimentConfig
{
    // shared
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    std::vector<double> rates = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::string out; // empty: stdout

    // SISO
    std::size_t users = 5;
    double gain_floor = 0.01;
    std::string ordering = "ordered"; // ordered | unordered
    std::vector<double> gains;              // siso-det: explicit power gains
    std::vector<double> channel_amplitudes; // siso-det: |h_m|, squared on use
    double slot_duration = 1.0;

    // MISO
    std::size_t g1_users = 10;
    std::size_t g2_users = 3;
    std::vector<double> antennas = {257};
    double carrier_ghz = 28.0;
    double p_g1_dbm = 10.0;
    std::string beam_mode = "both"; // beamfocusing | zero_forcing | both
    double gain_scale = 1e8;
    double g1_range_min = 10.0;
    double g1_range_max = 50.0;
    double g1_range = 50.0; // miso-det
    double g2_range = 200.0;
    double g2_angle_span_deg = 60.0;
    std::string sweep = "rate"; // rate | antennas

    // verify
    std::string suite = "all";
    double perturb = 0.0;
    std::size_t instances = 0; // 0: suite default

    bool ordered() const { return ordering == "ordered"; }
};

struct ConfigKey
{
    std::string name;
    std::string help;
    std::function<void(ExperimentConfig &, const std::string &)> assign;
};

/// All recognised keys, in documentation order.
const std::vector<ConfigKey> &config_keys();

/// Applies one key/value pair. Throws ConfigError for an unknown key or a malformed value.
void apply_config_value(ExperimentConfig &config, const std::string &key, const std::string &value);

struct ConfigEntry
{
    std::string key;
    std::string value;
    int line = 0;
};

/// Parses `key = value` lines; `#` starts a comment. Errors carry `source:line:`.
std::vector<ConfigEntry> parse_config_text(const std::string &text, const std::string &source);

/// Reads and applies a config file on top of `config`.
void load_config_file(ExperimentConfig &config, const std::string &path);

/// Checks the fields a subcommand depends on. Throws ConfigError naming the field.
void validate_config(const ExperimentConfig &config, const std::string &command);

/// Number list: comma separated values, or `start:stop:step` (inclusive).
std::vector<double> parse_number_list(const std::string &text);

} // namespace hynoma

#endif

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

#include "hynoma/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hynoma
{

namespace
{

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string &text)
{
    const std::string t = trim(text);
    std::size_t used = 0;
    double value = 0.0;
    try
    {
        value = std::stod(t, &used);
    }
    catch (const std::exception &)
    {
        throw ConfigError("'" + t + "' is not a number");
    }
    if (used != t.size() || !std::isfinite(value))
        throw ConfigError("'" + t + "' is not a finite number");
    return value;
}

std::uint64_t parse_u64(const std::string &text)
{
    const std::string t = trim(text);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("'" + t + "' is not a non-negative integer");
    try
    {
        return std::stoull(t);
    }
    catch (const std::exception &)
    {
        throw ConfigError("'" + t + "' is out of range");
    }
}

std::string parse_choice(const std::string &text, std::initializer_list<const char *> choices)
{
    const std::string t = trim(text);
    std::string listing;
    for (const char *c : choices)
    {
        if (t == c)
            return t;
        listing += listing.empty() ? c : std::string(", ") + c;
    }
    throw ConfigError("'" + t + "' is not one of: " + listing);
}

template <typename Field> ConfigKey number_key(const char *name, const char *help, Field ExperimentConfig::*field)
{
    return {name, help, [field](ExperimentConfig &c, const std::string &v) { c.*field = parse_double(v); }};
}

template <typename Field> ConfigKey count_key(const char *name, const char *help, Field ExperimentConfig::*field)
{
    return {name, help, [field](ExperimentConfig &c, const std::string &v) { c.*field = Field(parse_u64(v)); }};
}

ConfigKey list_key(const char *name, const char *help, std::vector<double> ExperimentConfig::*field)
{
    return {name, help, [field](ExperimentConfig &c, const std::string &v) { c.*field = parse_number_list(v); }};
}

std::vector<ConfigKey> build_keys()
{
    using C = ExperimentConfig;
    std::vector<ConfigKey> keys;
    keys.push_back(count_key("seed", "base RNG seed", &C::seed));
    keys.push_back(count_key("trials", "Monte-Carlo trials per sweep point", &C::trials));
    keys.push_back(list_key("rates", "target rates in nats, list or start:stop:step", &C::rates));
    keys.push_back({"out", "output CSV path (stdout when empty)", [](C &c, const std::string &v) { c.out = trim(v); }});

    keys.push_back(count_key("users", "SISO user count M", &C::users));
    keys.push_back(number_key("gain_floor", "lower bound on sampled SISO gains", &C::gain_floor));
    keys.push_back({"ordering", "ordered (sort gains descending) or unordered",
                    [](C &c, const std::string &v) { c.ordering = parse_choice(v, {"ordered", "unordered"}); }});
    keys.push_back(list_key("gains", "siso-det power gains", &C::gains));
    keys.push_back(list_key("channel_amplitudes", "siso-det channel amplitudes |h_m|", &C::channel_amplitudes));
    keys.push_back(number_key("slot_duration", "slot duration T in seconds", &C::slot_duration));

    keys.push_back(count_key("g1_users", "legacy near-field users M", &C::g1_users));
    keys.push_back(count_key("g2_users", "far users K", &C::g2_users));
    keys.push_back(list_key("antennas", "array sizes N (list when sweep = antennas)", &C::antennas));
    keys.push_back(number_key("carrier_ghz", "carrier frequency in GHz", &C::carrier_ghz));
    keys.push_back(number_key("p_g1_dbm", "legacy user transmit power in dBm", &C::p_g1_dbm));
    keys.push_back({"beam_mode", "beamfocusing, zero_forcing or both", [](C &c, const std::string &v) {
                        c.beam_mode = parse_choice(v, {"beamfocusing", "zero_forcing", "both"});
                    }});
    keys.push_back(number_key("gain_scale", "channel power normalization multiplier", &C::gain_scale));
    keys.push_back(number_key("g1_range_min", "inner radius of the G1 half ring in m", &C::g1_range_min));
    keys.push_back(number_key("g1_range_max", "outer radius of the G1 half ring in m", &C::g1_range_max));
    keys.push_back(number_key("g1_range", "G1 range for miso-det in m", &C::g1_range));
    keys.push_back(number_key("g2_range", "G2 range in m", &C::g2_range));
    keys.push_back(number_key("g2_angle_span_deg", "G2 angles spread over +-span in miso-sweep", &C::g2_angle_span_deg));
    keys.push_back({"sweep", "miso-sweep x axis: rate or antennas",
                    [](C &c, const std::string &v) { c.sweep = parse_choice(v, {"rate", "antennas"}); }});

    keys.push_back({"suite", "verify suite name", [](C &c, const std::string &v) { c.suite = trim(v); }});
    keys.push_back(number_key("perturb", "relative perturbation injected by the oracle suite", &C::perturb));
    keys.push_back(count_key("instances", "instances per verify suite (0: suite default)", &C::instances));
    return keys;
}

} // namespace

std::vector<double> parse_number_list(const std::string &text)
{
    const std::string t = trim(text);
    if (t.empty())
        return {};
    if (t.find(':') != std::string::npos)
    {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        for (std::string part; std::getline(ss, part, ':');)
            parts.push_back(part);
        if (parts.size() != 3)
            throw ConfigError("range '" + t + "' must be start:stop:step");
        const double start = parse_double(parts[0]), stop = parse_double(parts[1]), step = parse_double(parts[2]);
        if (!(step > 0.0) || stop < start)
            throw ConfigError("range '" + t + "' needs step > 0 and stop >= start");
        std::vector<double> out;
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(start + step * static_cast<double>(i));
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(t);
    for (std::string item; std::getline(ss, item, ',');)
        out.push_back(parse_double(item));
    return out;
}

const std::vector<ConfigKey> &config_keys()
{
    static const std::vector<ConfigKey> keys = build_keys();
    return keys;
}

void apply_config_value(ExperimentConfig &config, const std::string &key, const std::string &value)
{
    for (const auto &k : config_keys())
        if (k.name == key)
        {
            try
            {
                k.assign(config, value);
            }
            catch (const ConfigError &e)
            {
                throw ConfigError("key '" + key + "': " + e.what());
            }
            return;
        }
    throw ConfigError("unknown key '" + key + "'");
}

std::vector<ConfigEntry> parse_config_text(const std::string &text, const std::string &source)
{
    std::vector<ConfigEntry> out;
    std::stringstream ss(text);
    int line_no = 0;
    for (std::string line; std::getline(ss, line);)
    {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(line_no) + ": missing key");
        out.push_back({key, trim(line.substr(eq + 1)), line_no});
    }
    return out;
}

void load_config_file(ExperimentConfig &config, const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();

    for (const auto &entry : parse_config_text(buffer.str(), path))
    {
        try
        {
            apply_config_value(config, entry.key, entry.value);
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(path + ":" + std::to_string(entry.line) + ": " + e.what());
        }
    }
}

void validate_config(const ExperimentConfig &c, const std::string &command)
{
    const auto fail = [](const std::string &field, const std::string &what) {
        throw ConfigError("field '" + field + "': " + what);
    };
    if (!(c.slot_duration > 0.0))
        fail("slot_duration", "must be positive");
    for (double r : c.rates)
        if (!(r >= 0.0))
            fail("rates", "must be non-negative");

    if (command == "siso-sweep")
    {
        if (c.trials < 1)
            fail("trials", "must be at least 1");
        if (c.users < 1)
            fail("users", "must be at least 1");
        if (!(c.gain_floor >= 0.0))
            fail("gain_floor", "must be non-negative");
        if (c.rates.empty())
            fail("rates", "must not be empty");
    }
    else if (command == "siso-det")
    {
        if (c.gains.empty() == c.channel_amplitudes.empty())
            fail("gains", "give exactly one of gains or channel_amplitudes");
        for (double g : c.gains)
            if (!(g > 0.0))
                fail("gains", "must be positive");
        for (double h : c.channel_amplitudes)
            if (h == 0.0)
                fail("channel_amplitudes", "must be non-zero");
        if (c.rates.empty())
            fail("rates", "must not be empty");
    }
    else if (command == "miso-sweep" || command == "miso-det")
    {
        if (c.g2_users < 1 || c.g1_users <= c.g2_users)
            fail("g1_users", "need g1_users > g2_users >= 1");
        if (c.antennas.empty())
            fail("antennas", "must not be empty");
        for (double n : c.antennas)
        {
            if (!(n >= 1.0) || n != std::floor(n))
                fail("antennas", "must be positive integers");
            if (c.beam_mode != "beamfocusing" && n < double(c.g1_users))
                fail("antennas", "zero-forcing needs at least g1_users antennas");
        }
        if (!(c.carrier_ghz > 0.0))
            fail("carrier_ghz", "must be positive");
        if (!(c.gain_scale > 0.0))
            fail("gain_scale", "must be positive");
        if (!(c.g2_range > 0.0))
            fail("g2_range", "must be positive");
        if (c.rates.empty())
            fail("rates", "must not be empty");
        if (command == "miso-sweep")
        {
            if (c.trials < 1)
                fail("trials", "must be at least 1");
            if (!(c.g1_range_min > 0.0) || !(c.g1_range_max >= c.g1_range_min))
                fail("g1_range_min", "need 0 < g1_range_min <= g1_range_max");
            if (!(c.g2_angle_span_deg >= 0.0) || !(c.g2_angle_span_deg < 90.0))
                fail("g2_angle_span_deg", "must lie in [0, 90)");
            if (c.sweep == "antennas" && c.rates.size() != 1)
                fail("rates", "an antenna sweep takes a single rate");
            if (c.sweep == "rate" && c.antennas.size() != 1)
                fail("antennas", "a rate sweep takes a single array size");
        }
        else
        {
            if (!(c.g1_range > 0.0))
                fail("g1_range", "must be positive");
            if (c.antennas.size() != 1)
                fail("antennas", "miso-det takes a single array size");
            if (c.antennas[0] < double(c.g1_users))
                fail("antennas", "miso-det evaluates zero-forcing and needs at least g1_users antennas");
        }
    }
    else if (command == "verify")
    {
        if (!(c.perturb >= 0.0))
            fail("perturb", "must be non-negative");
    }
    else
    {
        throw ConfigError("unknown subcommand '" + command + "'");
    }
}

} // namespace hynoma

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

// hynoma: experiment runner and verification front end.
//
//   hynoma <siso-sweep|siso-det|miso-sweep|miso-det|verify> [--config FILE] [--out FILE] [--KEY VALUE ...]
//
// Values are applied in order: built-in defaults, then the config file, then flags.
// Exit codes: 0 success, 1 config error, 2 verification failure, 3 solver failure.

#include "hynoma/config.hpp"
#include "hynoma/csv.hpp"
#include "hynoma/experiments.hpp"
#include "hynoma/verify_suites.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

namespace
{

constexpr int exit_config = 1;
constexpr int exit_verify = 2;
constexpr int exit_solver = 3;

struct Subcommand
{
    CLI::App *app = nullptr;
    std::string config_path;
    std::map<std::string, std::optional<std::string>> overrides;
};

Subcommand add_subcommand(CLI::App &app, const std::string &name, const std::string &description)
{
    Subcommand sub;
    sub.app = app.add_subcommand(name, description);
    for (const auto &key : hynoma::config_keys())
        sub.overrides[key.name];
    return sub;
}

void bind_overrides(Subcommand &sub)
{
    // Bound once the Subcommand has its final address, since CLI11 keeps pointers to the targets.
    sub.app->add_option("--config", sub.config_path, "config file with key = value lines");
    for (const auto &key : hynoma::config_keys())
        sub.app->add_option("--" + key.name, sub.overrides[key.name], key.help);
}

int run(const std::string &command, const hynoma::ExperimentConfig &config)
{
    using namespace hynoma;
    if (command == "verify")
    {
        VerifyOptions options;
        options.seed = config.seed;
        options.instances = config.instances;
        options.perturb = config.perturb;
        std::vector<PropertyResult> results;
        try
        {
            results = run_verify_suite(config.suite, options);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
        bool ok = true;
        for (const auto &r : results)
        {
            std::cerr << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.property << "  max deviation "
                      << format_number(r.max_deviation) << " (tolerance " << format_number(r.tolerance) << ", "
                      << r.instances << " instances)\n";
            ok = ok && r.passed;
        }
        write_csv(verify_table(results), config.out);
        return ok ? 0 : exit_verify;
    }

    CsvTable table = command == "siso-sweep"   ? run_siso_sweep(config)
                     : command == "siso-det"   ? run_siso_det(config)
                     : command == "miso-sweep" ? run_miso_sweep(config)
                                               : run_miso_det(config);
    write_csv(table, config.out);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hybrid NOMA power allocation experiments"};
    app.require_subcommand(1);

    std::vector<Subcommand> subs;
    subs.push_back(add_subcommand(app, "siso-sweep", "Monte-Carlo SISO energy versus rate"));
    subs.push_back(add_subcommand(app, "siso-det", "per-slot powers for explicit SISO gains"));
    subs.push_back(add_subcommand(app, "miso-sweep", "Monte-Carlo two-group MISO energy"));
    subs.push_back(add_subcommand(app, "miso-det", "deterministic two-group MISO energy table"));
    subs.push_back(add_subcommand(app, "verify", "run property suites"));
    for (auto &sub : subs)
        bind_overrides(sub);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e) == 0 ? 0 : exit_config;
    }

    for (const auto &sub : subs)
    {
        if (!sub.app->parsed())
            continue;
        const std::string command = sub.app->get_name();
        hynoma::ExperimentConfig config;
        try
        {
            if (!sub.config_path.empty())
                hynoma::load_config_file(config, sub.config_path);
            for (const auto &key : hynoma::config_keys())
                if (const auto &value = sub.overrides.at(key.name))
                    hynoma::apply_config_value(config, key.name, *value);
            hynoma::validate_config(config, command);
            return run(command, config);
        }
        catch (const hynoma::ConfigError &e)
        {
            std::cerr << "config error: " << e.what() << '\n';
            return exit_config;
        }
        catch (const std::exception &e)
        {
            std::cerr << "solver failure: " << e.what() << '\n';
            return exit_solver;
        }
    }
    return exit_config;
}

// SPDX-License-Identifier: Apache-2.0
//
// beamsel - beam selection for beamspace mmWave massive MIMO
// Copyright (C) 2026 The beamsel authors
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

// beamsel command line: run a configured experiment, reproduce a figure
// preset, or run the numerical invariant suite.

#include "beamsel/beamsel.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct OutputOptions {
    std::string out;
    std::string summary;
    std::string aco_log;
    std::string dump_channel;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool timing = false;
};

void add_output_options(CLI::App *cmd, OutputOptions &o)
{
    cmd->add_option("--out", o.out, "CSV file for per-trial rows")->required();
    cmd->add_option("--summary", o.summary, "CSV file for per-cell mean and 95% CI");
    cmd->add_option("--aco-log", o.aco_log, "CSV file for the ACO iteration log of trial 0");
    cmd->add_option("--dump-channel", o.dump_channel, "CSV dump of trial 0's beamspace channel");
    cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--timing", o.timing, "record wall time per selection (output no longer reproducible)");
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw beamsel::config_error("cannot open output file '" + path + "'");
    return os;
}

int execute(const beamsel::ExperimentSpec &spec, const OutputOptions &o, bool exhaustive_required)
{
    beamsel::RunOptions opt;
    opt.threads = o.threads;
    opt.timing = o.timing;
    opt.aco_log = !o.aco_log.empty();
    opt.keep_first_channel = !o.dump_channel.empty();

    const auto result = beamsel::run_experiment(spec, opt);
    {
        auto os = open_out(o.out);
        beamsel::write_csv(os, result.rows);
    }
    if (!o.summary.empty() && !result.rows.empty()) {
        auto os = open_out(o.summary);
        beamsel::write_summary_csv(os, beamsel::aggregate(result.rows));
    }
    if (opt.aco_log) {
        auto os = open_out(o.aco_log);
        beamsel::write_aco_log(os, result.aco_log);
    }
    if (result.first_channel) {
        auto os = open_out(o.dump_channel);
        beamsel::write_channel_csv(os, result.first_channel->h_bar);
    }
    for (const auto &f : result.budget_failures) std::cerr << "budget exceeded: " << f << '\n';
    if (exhaustive_required && !result.budget_failures.empty()) return kExitBudget;
    return kExitOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Beam selection for beamspace mmWave massive MIMO"};
    app.require_subcommand(1);

    // run
    auto *run = app.add_subcommand("run", "run an experiment described by a config file");
    std::string config_path;
    std::string schemes;
    int trials = 0;
    std::uint64_t seed = 0;
    OutputOptions run_out;
    run->add_option("--config", config_path, "INI config file")->required();
    run->add_option("--schemes", schemes, "comma list of mm1,ia,aco,exhaustive");
    run->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "master seed");
    add_output_options(run, run_out);

    // figure
    auto *figure = app.add_subcommand("figure", "reproduce a sum-rate figure preset");
    std::string preset;
    int fig_trials = 0;
    std::uint64_t fig_seed = 0;
    OutputOptions fig_out;
    figure->add_option("preset", preset, "a, b or c")->required();
    figure->add_option("--trials", fig_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    figure->add_option("--seed", fig_seed, "master seed");
    add_output_options(figure, fig_out);

    auto *validate = app.add_subcommand("validate", "run the numerical invariant suite");
    std::uint64_t val_seed = 2024;
    validate->add_option("--seed", val_seed, "seed for the random instances");

    app.add_subcommand("config", "print a config file with every default filled in");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            beamsel::ExperimentSpec spec = beamsel::load_config(config_path);
            if (run->count("--schemes")) spec.schemes = beamsel::parse_schemes(schemes);
            if (run->count("--trials")) spec.n_trials = trials;
            if (run->count("--seed")) spec.master_seed = seed;
            spec.validate();
            const bool wants_exhaustive =
                std::find(spec.schemes.begin(), spec.schemes.end(), beamsel::Scheme::Exhaustive) !=
                spec.schemes.end();
            return execute(spec, run_out, wants_exhaustive);
        }
        if (figure->parsed()) {
            beamsel::ExperimentSpec spec = beamsel::figure_preset(preset);
            if (figure->count("--trials")) spec.n_trials = fig_trials;
            if (figure->count("--seed")) spec.master_seed = fig_seed;
            return execute(spec, fig_out, false);
        }
        if (validate->parsed()) {
            bool ok = true;
            for (const auto &c : beamsel::run_invariant_suite(val_seed)) {
                std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
                ok = ok && c.passed;
            }
            return ok ? kExitOk : kExitFailure;
        }
        std::cout << beamsel::default_config_text();
        return kExitOk;
    } catch (const beamsel::config_error &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const beamsel::budget_exceeded &e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

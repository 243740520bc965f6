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

#ifndef BEAMSEL_EXPERIMENT_HPP
#define BEAMSEL_EXPERIMENT_HPP

#include "beamsel/aco.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace beamsel {

enum class SweepParam { TransmitPowerDb, NUsers, Bk, Tmax };

inline std::string to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::TransmitPowerDb: return "transmit_power_db";
    case SweepParam::NUsers: return "n_users";
    case SweepParam::Bk: return "b_k";
    case SweepParam::Tmax: return "t_max";
    }
    return "unknown";
}

inline SweepParam sweep_param_from_string(const std::string &s)
{
    if (s == "transmit_power_db") return SweepParam::TransmitPowerDb;
    if (s == "n_users") return SweepParam::NUsers;
    if (s == "b_k") return SweepParam::Bk;
    if (s == "t_max") return SweepParam::Tmax;
    throw config_error("unknown sweep parameter '" + s + "'");
}

// One swept axis. `name` labels the rows in the CSV; the fixed_* fields pin
// ACO settings for this axis only.
struct Sweep {
    std::string name;
    SweepParam param = SweepParam::TransmitPowerDb;
    std::vector<double> values;
    std::optional<int> fixed_b_k;
    std::optional<int> fixed_t_max;
};

struct ExperimentSpec {
    ScenarioConfig scenario;
    bool random_sector_origin = true;  // draw omega_0 per trial
    AcoParams aco;
    std::vector<Scheme> schemes{Scheme::MM1, Scheme::IA, Scheme::ACO};
    std::vector<Sweep> sweeps;
    int n_trials = 1000;
    std::uint64_t master_seed = 1;
    std::uint64_t exhaustive_budget = kDefaultExhaustiveBudget;

    [[nodiscard]] int max_users() const
    {
        int k = scenario.n_users;
        for (const auto &s : sweeps)
            if (s.param == SweepParam::NUsers)
                for (double v : s.values) k = std::max(k, static_cast<int>(v));
        return k;
    }

    void validate() const
    {
        scenario.validate();
        if (n_trials < 1) throw config_error("n_trials must be positive");
        if (schemes.empty()) throw config_error("at least one scheme is required");
        if (sweeps.empty()) throw config_error("at least one sweep is required");
        for (const auto &s : sweeps) {
            if (s.values.empty()) throw config_error("sweep '" + s.name + "' has no values");
            for (double v : s.values) {
                const bool integral = v == std::floor(v);
                if (s.param != SweepParam::TransmitPowerDb && (!integral || v < 1))
                    throw config_error("sweep '" + s.name + "' needs positive integer values");
                if (s.param == SweepParam::NUsers && v > scenario.n_antennas)
                    throw config_error("n_users sweep exceeds n_antennas");
                if (s.param == SweepParam::Bk && v > scenario.n_antennas)
                    throw config_error("b_k sweep exceeds n_antennas");
            }
        }
        AcoParams probe = aco;
        probe.validate(scenario.n_antennas, scenario.n_users);
    }
};

struct TrialResult {
    int trial = 0;
    Scheme scheme = Scheme::MM1;
    std::string sweep_name;
    double sweep_value = 0.0;
    double sum_rate = 0.0;
    double trace = 0.0;
    long long inversions = 0;
    double time_ms = 0.0;
    bool regularized = false;
    bool duplicates = false;

    // Not part of the CSV.
    int sweep_index = 0;
    int value_index = 0;
    int n_antennas = 0;
    int n_users = 0;
    int interference_users = 0;
    int t_max = 0;
    int b_tol = 0;
    std::uint64_t channel_hash = 0;
};

struct AcoLogRow {
    std::string sweep_name;
    double sweep_value = 0.0;
    IterationRecord record;
};

struct RunOptions {
    unsigned threads = 1;
    bool timing = false;          // fill time_ms; off keeps the CSV reproducible
    bool aco_log = false;         // keep ACO iteration history of trial 0
    bool keep_first_channel = false;
};

struct ExperimentResult {
    std::vector<TrialResult> rows;
    std::vector<std::string> budget_failures;  // one entry per refused (scheme, K)
    std::vector<AcoLogRow> aco_log;
    std::optional<BeamspaceChannel> first_channel;
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, int trial)
{
    return master ^ splitmix64(static_cast<std::uint64_t>(trial));
}

// FNV-1a over the raw bytes of H_bar.
inline std::uint64_t channel_hash(const CMatrix &h_bar)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto *p = reinterpret_cast<const unsigned char *>(h_bar.data());
    const auto n = static_cast<std::size_t>(h_bar.size()) * sizeof(cplx);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Channel of one trial with the largest user count of the spec; smaller user
// counts take its leading columns.
inline BeamspaceChannel trial_channel(const ExperimentSpec &spec, int trial)
{
    Rng rng(trial_seed(spec.master_seed, trial));
    ScenarioConfig sc = spec.scenario;
    sc.n_users = spec.max_users();
    if (spec.random_sector_origin) {
        constexpr double half_pi = std::numbers::pi / 2.0;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        sc.sector_origin = -half_pi + (std::numbers::pi - sc.los_support_width()) * unit(rng);
    }
    return generate_channel(sc, rng);
}

namespace detail {

struct CachedSelection {
    SelectionOutcome outcome;
    double time_ms = 0.0;
    bool refused = false;
};

inline std::vector<TrialResult> run_trial(const ExperimentSpec &spec, int trial,
                                          const RunOptions &opt, std::vector<std::string> &refusals,
                                          std::vector<AcoLogRow> *aco_log)
{
    const BeamspaceChannel full = trial_channel(spec, trial);
    const double sigma2 = spec.scenario.noise_variance;
    std::map<std::tuple<int, int, int, int>, CachedSelection> cache;
    std::vector<TrialResult> rows;

    for (std::size_t si = 0; si < spec.sweeps.size(); ++si) {
        const Sweep &sw = spec.sweeps[si];
        for (std::size_t vi = 0; vi < sw.values.size(); ++vi) {
            const double v = sw.values[vi];
            int k = spec.scenario.n_users;
            double rho_db = spec.scenario.transmit_power_db;
            AcoParams aco = spec.aco;
            if (sw.fixed_b_k) aco.b_k = *sw.fixed_b_k;
            if (sw.fixed_t_max) aco.t_max = *sw.fixed_t_max;
            switch (sw.param) {
            case SweepParam::TransmitPowerDb: rho_db = v; break;
            case SweepParam::NUsers: k = static_cast<int>(v); break;
            case SweepParam::Bk: aco.b_k = static_cast<int>(v); break;
            case SweepParam::Tmax: aco.t_max = static_cast<int>(v); break;
            }
            aco.b_k_per_user.clear();
            const double rho = db_to_linear(rho_db);
            const BeamspaceChannel ch = k == full.n_users() ? full : first_users(full, k);
            const std::uint64_t hash = channel_hash(ch.h_bar);

            for (Scheme scheme : spec.schemes) {
                const bool is_aco = scheme == Scheme::ACO;
                const auto key = std::make_tuple(static_cast<int>(scheme), k,
                                                 is_aco ? aco.b_k : 0, is_aco ? aco.t_max : 0);
                auto it = cache.find(key);
                if (it == cache.end()) {
                    CachedSelection c;
                    const auto t0 = std::chrono::steady_clock::now();
                    try {
                        switch (scheme) {
                        case Scheme::MM1: c.outcome = select_mm1(ch, rho, sigma2, aco.sigma_reg); break;
                        case Scheme::IA: c.outcome = select_ia(ch, rho, sigma2, aco.sigma_reg); break;
                        case Scheme::Exhaustive:
                            c.outcome = select_exhaustive(ch, rho, sigma2, aco.sigma_reg,
                                                          spec.exhaustive_budget);
                            break;
                        case Scheme::ACO: {
                            Rng aco_rng(splitmix64(trial_seed(spec.master_seed, trial)));
                            c.outcome = select_aco(ch, rho, sigma2, aco, &aco_rng, aco_log != nullptr);
                            if (aco_log)
                                for (const auto &rec : c.outcome.history)
                                    aco_log->push_back({sw.name, v, rec});
                            break;
                        }
                        }
                    } catch (const budget_exceeded &e) {
                        c.refused = true;
                        refusals.push_back(to_string(scheme) + ": " + e.what());
                    }
                    const auto t1 = std::chrono::steady_clock::now();
                    if (opt.timing)
                        c.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                    it = cache.emplace(key, std::move(c)).first;
                }
                const CachedSelection &c = it->second;
                if (c.refused) continue;

                TrialResult r;
                r.trial = trial;
                r.scheme = scheme;
                r.sweep_name = sw.name;
                r.sweep_value = v;
                r.trace = c.outcome.trace_metric;
                r.sum_rate = sum_rate_from_trace(r.trace, rho, sigma2, k);
                r.inversions = c.outcome.inversion_count;
                r.time_ms = c.time_ms;
                r.regularized = c.outcome.regularized;
                r.duplicates = c.outcome.duplicates;
                r.sweep_index = static_cast<int>(si);
                r.value_index = static_cast<int>(vi);
                r.n_antennas = ch.n_antennas();
                r.n_users = k;
                r.interference_users = c.outcome.interference_users;
                r.t_max = aco.t_max;
                r.b_tol = aco.b_k * k;
                r.channel_hash = hash;
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

} // namespace detail

// Monte Carlo driver. Trials run on a pool of `opt.threads` workers; rows are
// sorted by (sweep, sweep value, trial, scheme) so the output does not depend
// on scheduling.
inline ExperimentResult run_experiment(const ExperimentSpec &spec, const RunOptions &opt = {})
{
    spec.validate();
    ExperimentResult result;
    std::vector<std::vector<TrialResult>> per_trial(static_cast<std::size_t>(spec.n_trials));
    std::vector<std::vector<std::string>> refusals(static_cast<std::size_t>(spec.n_trials));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (int t = next++; t < spec.n_trials; t = next++) {
            try {
                auto *log = (opt.aco_log && t == 0) ? &result.aco_log : nullptr;
                per_trial[static_cast<std::size_t>(t)] =
                    detail::run_trial(spec, t, opt, refusals[static_cast<std::size_t>(t)], log);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = spec.n_trials;
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(spec.n_trials)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (auto &rows : per_trial)
        for (auto &r : rows) result.rows.push_back(std::move(r));
    std::stable_sort(result.rows.begin(), result.rows.end(), [](const TrialResult &l, const TrialResult &r) {
        return std::tie(l.sweep_index, l.value_index, l.trial) <
               std::tie(r.sweep_index, r.value_index, r.trial);
    });
    // Trial 0 already tells which (scheme, K) pairs were refused.
    if (!refusals.empty()) result.budget_failures = refusals.front();
    if (opt.keep_first_channel) result.first_channel = trial_channel(spec, 0);
    return result;
}

inline constexpr const char *kCsvHeader =
    "trial,scheme,sweep_name,sweep_value,sum_rate,trace,inversions,time_ms,regularized_flag,"
    "duplicate_flag";

inline void write_csv(std::ostream &os, const std::vector<TrialResult> &rows)
{
    os << kCsvHeader << '\n';
    for (const auto &r : rows)
        os << fmt::format("{},{},{},{},{:.17g},{:.17g},{},{:.3f},{},{}\n", r.trial,
                          to_string(r.scheme), r.sweep_name, r.sweep_value, r.sum_rate, r.trace,
                          r.inversions, r.time_ms, r.regularized ? 1 : 0, r.duplicates ? 1 : 0);
}

inline void write_aco_log(std::ostream &os, const std::vector<AcoLogRow> &rows)
{
    os << "sweep_name,sweep_value,t,k,beam,d,trace\n";
    for (const auto &r : rows)
        os << fmt::format("{},{},{},{},{},{:.17g},{:.17g}\n", r.sweep_name, r.sweep_value,
                          r.record.t, r.record.user, r.record.beam, r.record.utility,
                          r.record.best_trace);
}

struct SampleStats {
    std::size_t count = 0;
    double mean = 0.0;
    double half_width = 0.0;  // 95% normal-approximation half width

    [[nodiscard]] double ci_low() const { return mean - half_width; }
    [[nodiscard]] double ci_high() const { return mean + half_width; }
};

inline SampleStats sample_stats(const std::vector<double> &x)
{
    if (x.size() < 2) throw empty_cell("need at least two samples per cell");
    SampleStats s;
    s.count = x.size();
    double sum = 0.0;
    for (double v : x) sum += v;
    s.mean = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
    s.half_width = 1.959963984540054 * sd / std::sqrt(static_cast<double>(x.size()));
    return s;
}

struct CellSummary {
    Scheme scheme = Scheme::MM1;
    std::string sweep_name;
    double sweep_value = 0.0;
    SampleStats sum_rate;
};

// Mean and 95% CI of the sum rate per (sweep, value, scheme) cell.
inline std::vector<CellSummary> aggregate(const std::vector<TrialResult> &rows)
{
    if (rows.empty()) throw empty_cell("no results to aggregate");
    std::map<std::tuple<int, int, int>, std::pair<CellSummary, std::vector<double>>> cells;
    for (const auto &r : rows) {
        auto &cell = cells[{r.sweep_index, r.value_index, static_cast<int>(r.scheme)}];
        cell.first.scheme = r.scheme;
        cell.first.sweep_name = r.sweep_name;
        cell.first.sweep_value = r.sweep_value;
        cell.second.push_back(r.sum_rate);
    }
    std::vector<CellSummary> out;
    for (auto &[key, cell] : cells) {
        cell.first.sum_rate = sample_stats(cell.second);
        out.push_back(cell.first);
    }
    return out;
}

inline const CellSummary &find_cell(const std::vector<CellSummary> &cells, Scheme scheme,
                                    const std::string &sweep, double value)
{
    for (const auto &c : cells)
        if (c.scheme == scheme && c.sweep_name == sweep && c.sweep_value == value) return c;
    throw empty_cell(fmt::format("no cell for {} at {}={}", to_string(scheme), sweep, value));
}

inline void write_summary_csv(std::ostream &os, const std::vector<CellSummary> &cells)
{
    os << "scheme,sweep_name,sweep_value,trials,mean_sum_rate,ci_low,ci_high\n";
    for (const auto &c : cells)
        os << fmt::format("{},{},{},{},{:.10g},{:.10g},{:.10g}\n", to_string(c.scheme),
                          c.sweep_name, c.sweep_value, c.sum_rate.count, c.sum_rate.mean,
                          c.sum_rate.ci_low(), c.sum_rate.ci_high());
}

// Presets for the three sum-rate figures.
inline ExperimentSpec figure_preset(const std::string &name)
{
    ExperimentSpec spec;
    spec.aco.b_k = 10;
    spec.aco.t_max = 10;
    if (name == "a") {
        spec.scenario.n_antennas = 32;
        spec.scenario.n_users = 5;
        spec.sweeps.push_back({"transmit_power_db", SweepParam::TransmitPowerDb,
                               {0, 5, 10, 15, 20, 25, 30}, {}, {}});
    } else if (name == "b") {
        spec.scenario.n_antennas = 100;
        spec.scenario.n_users = 4;
        spec.scenario.transmit_power_db = 20.0;
        spec.sweeps.push_back({"n_users", SweepParam::NUsers, {4, 8, 12, 16, 20, 24, 28, 32}, {}, {}});
    } else if (name == "c") {
        spec.scenario.n_antennas = 100;
        spec.scenario.n_users = 16;
        spec.scenario.transmit_power_db = 20.0;
        spec.sweeps.push_back({"b_k", SweepParam::Bk, {1, 2, 4, 6, 8, 10}, {}, 10});
        spec.sweeps.push_back({"t_max", SweepParam::Tmax, {1, 2, 4, 6, 8, 10}, 10, {}});
        spec.sweeps.push_back({"b_k_t_max_1", SweepParam::Bk, {2}, {}, 1});
    } else {
        throw config_error("unknown figure preset '" + name + "'");
    }

    spec.schemes = {Scheme::MM1, Scheme::IA, Scheme::ACO};
    bool exhaustive_ok = true;
    for (const auto &s : spec.sweeps)
        for (double v : s.values) {
            const int k = s.param == SweepParam::NUsers ? static_cast<int>(v) : spec.scenario.n_users;
            exhaustive_ok = exhaustive_ok && binomial(spec.scenario.n_antennas, k) <= spec.exhaustive_budget;
        }
    if (exhaustive_ok) spec.schemes.insert(spec.schemes.begin() + 2, Scheme::Exhaustive);
    return spec;
}

} // namespace beamsel

#endif

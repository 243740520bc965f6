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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails. Takes several minutes on one core.

#include "beamsel/beamsel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace beamsel;

namespace {

struct Verdict {
    std::string name;
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string note)
    {
        passed = passed && ok;
        notes.push_back(fmt::format("{} {}", ok ? "ok  " : "MISS", std::move(note)));
    }
};

RunOptions options()
{
    RunOptions opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    return opt;
}

ExperimentResult run_preset(const std::string &name, int trials, bool with_exhaustive,
                            std::uint64_t seed = 1)
{
    ExperimentSpec spec = figure_preset(name);
    spec.n_trials = trials;
    spec.master_seed = seed;
    if (!with_exhaustive) std::erase(spec.schemes, Scheme::Exhaustive);
    return run_experiment(spec, options());
}

std::string ci(const SampleStats &s)
{
    return fmt::format("{:.3f} [{:.3f}, {:.3f}]", s.mean, s.ci_low(), s.ci_high());
}

// Strict ordering with disjoint 95% intervals at every point of every sweep.
void check_ordering(Verdict &v, const std::string &preset, const ExperimentResult &res)
{
    const auto cells = aggregate(res.rows);
    const ExperimentSpec spec = figure_preset(preset);
    for (const auto &sweep : spec.sweeps)
        for (double x : sweep.values) {
            const auto &aco = find_cell(cells, Scheme::ACO, sweep.name, x).sum_rate;
            const auto &ia = find_cell(cells, Scheme::IA, sweep.name, x).sum_rate;
            const auto &mm1 = find_cell(cells, Scheme::MM1, sweep.name, x).sum_rate;
            const bool ok = aco.ci_low() > ia.ci_high() && ia.ci_low() > mm1.ci_high();
            v.require(ok, fmt::format("preset {} {}={:g} n={}: aco {} ia {} mm1 {}", preset,
                                      sweep.name, x, aco.count, ci(aco), ci(ia), ci(mm1)));
        }
}

double mean_rate(const std::vector<CellSummary> &cells, Scheme s, const std::string &sweep,
                 double x)
{
    return find_cell(cells, s, sweep, x).sum_rate.mean;
}

void check_inversions(Verdict &v, const std::string &preset, const ExperimentResult &res)
{
    long long bad = 0, checked = 0;
    std::string first;
    for (const auto &r : res.rows) {
        long long expected = -1;
        switch (r.scheme) {
        case Scheme::MM1: expected = 0; break;
        case Scheme::IA: expected = ia_inversions(r.n_antennas, r.n_users, r.interference_users); break;
        case Scheme::ACO: expected = static_cast<long long>(r.t_max) * r.b_tol; break;
        case Scheme::Exhaustive: continue;
        }
        ++checked;
        if (r.inversions != expected) {
            if (bad++ == 0)
                first = fmt::format(" (first: trial {} {} got {} want {})", r.trial,
                                    to_string(r.scheme), r.inversions, expected);
        }
    }
    v.require(bad == 0 && checked > 0,
              fmt::format("preset {}: {} rows checked, {} mismatches{}", preset, checked, bad, first));
}

} // namespace

int main()
{
    std::vector<Verdict> verdicts;

    fmt::print("running preset a with exhaustive search (500 trials)\n");
    const auto a_exh = run_preset("a", 500, true);
    fmt::print("running preset a (10000 trials)\n");
    const auto a_big = run_preset("a", 10000, false);
    fmt::print("running preset b (1000 trials)\n");
    const auto b = run_preset("b", 1000, false);
    fmt::print("running preset c (500 trials)\n");
    const auto c = run_preset("c", 500, false);

    {
        Verdict v{"1 aco within 5% of exhaustive at 20 dB"};
        const auto cells = aggregate(a_exh.rows);
        const double aco = mean_rate(cells, Scheme::ACO, "transmit_power_db", 20);
        const double exh = mean_rate(cells, Scheme::Exhaustive, "transmit_power_db", 20);
        v.require(aco >= 0.95 * exh,
                  fmt::format("aco {:.4f} exhaustive {:.4f} ratio {:.4f} (need >= 0.95)", aco, exh,
                              aco / exh));
        verdicts.push_back(std::move(v));
    }
    {
        Verdict v{"2 aco > ia > mm1 with disjoint 95% intervals"};
        check_ordering(v, "a", a_big);
        check_ordering(v, "b", b);
        verdicts.push_back(std::move(v));
    }
    {
        Verdict v{"3 candidate and iteration budget sensitivity"};
        const auto cells = aggregate(c.rows);
        const double full = mean_rate(cells, Scheme::ACO, "b_k", 10);
        const double bk2 = mean_rate(cells, Scheme::ACO, "b_k", 2);
        const double full_t = mean_rate(cells, Scheme::ACO, "t_max", 10);
        const double t1 = mean_rate(cells, Scheme::ACO, "t_max", 1);
        const double small = mean_rate(cells, Scheme::ACO, "b_k_t_max_1", 2);
        v.require(bk2 >= 0.85 * full, fmt::format("b_k=2 / b_k=10 = {:.4f} / {:.4f} = {:.4f} (need >= 0.85)",
                                                  bk2, full, bk2 / full));
        v.require(t1 >= 0.92 * full_t, fmt::format("t_max=1 / t_max=10 = {:.4f} / {:.4f} = {:.4f} (need >= 0.92)",
                                                   t1, full_t, t1 / full_t));
        v.require(small >= 27.0 && small <= 37.0,
                  fmt::format("b_k=2, t_max=1 mean {:.4f} bits/s/Hz (need [27, 37])", small));
        verdicts.push_back(std::move(v));
    }
    {
        Verdict v{"4 exact inversion counts"};
        check_inversions(v, "a", a_exh);
        check_inversions(v, "b", b);
        check_inversions(v, "c", c);
        long long rows = 0, bad = 0;
        for (const auto &r : c.rows) {
            if (r.scheme != Scheme::ACO || r.sweep_name != "b_k_t_max_1") continue;
            ++rows;
            const long long ia = ia_inversions(r.n_antennas, r.n_users, r.interference_users);
            if (r.inversions != 32 || (r.interference_users >= 1 && r.inversions >= ia)) ++bad;
        }
        v.require(rows > 0 && bad == 0,
                  fmt::format("preset c b_k=2, t_max=1: {} trials, {} with count != 32 or not below ia",
                              rows, bad));
        verdicts.push_back(std::move(v));
    }
    {
        Verdict v{"5 numerical invariants"};
        for (const auto &r : run_invariant_suite())
            v.require(r.passed, r.name + ": " + r.detail);
        verdicts.push_back(std::move(v));
    }
    {
        Verdict v{"6 byte-identical csv for identical seed"};
        auto once = [] {
            ExperimentSpec spec = figure_preset("a");
            spec.n_trials = 50;
            spec.master_seed = 7;
            std::ostringstream os;
            write_csv(os, run_experiment(spec, options()).rows);
            return os.str();
        };
        const std::string first = once();
        const std::string second = once();
        v.require(first == second && !first.empty(),
                  fmt::format("two runs, {} bytes each, {}", first.size(),
                              first == second ? "identical" : "different"));
        verdicts.push_back(std::move(v));
    }

    bool all = true;
    fmt::print("\n");
    for (const auto &v : verdicts) {
        fmt::print("{} criterion {}\n", v.passed ? "PASS" : "FAIL", v.name);
        for (const auto &n : v.notes) fmt::print("    {}\n", n);
        all = all && v.passed;
    }
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}

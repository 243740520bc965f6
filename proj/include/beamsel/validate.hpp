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

#ifndef BEAMSEL_VALIDATE_HPP
#define BEAMSEL_VALIDATE_HPP

#include "beamsel/experiment.hpp"
#include "beamsel/oracle.hpp"

#include <string>
#include <vector>

namespace beamsel {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

// Small random instance drawn from the default scenario.
inline BeamspaceChannel small_instance(Rng &rng, int max_n, int max_k)
{
    std::uniform_int_distribution<int> pick_k(1, max_k);
    ScenarioConfig sc;
    sc.n_users = pick_k(rng);
    std::uniform_int_distribution<int> pick_n(std::max(sc.n_users, 2), max_n);
    sc.n_antennas = pick_n(rng);
    std::uniform_real_distribution<double> origin(-1.5, 1.4);
    sc.sector_origin = origin(rng);
    return generate_channel(sc, rng);
}

} // namespace detail

// Max |U^H U - I| over the array sizes used by the presets.
inline CheckResult check_unitarity(double tol = 1e-10)
{
    double worst = 0.0;
    for (int n : {1, 2, 4, 8, 16, 32, 64, 100}) {
        const CMatrix u = dla_transform(n);
        const CMatrix e = u.adjoint() * u - CMatrix::Identity(n, n);
        worst = std::max(worst, e.cwiseAbs().maxCoeff());
    }
    return {"unitarity of the lens transform (N <= 100)", worst < tol,
            fmt::format("max |U^H U - I| = {:.3e} (tol {:.0e})", worst, tol)};
}

inline CheckResult check_parseval(std::uint64_t seed, int instances = 20, double tol = 1e-10)
{
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        ScenarioConfig sc;
        sc.n_antennas = i % 2 ? 100 : 32;
        sc.n_users = i % 2 ? 16 : 5;
        const BeamspaceChannel ch = generate_channel(sc, rng);
        for (Eigen::Index k = 0; k < ch.h_bar.cols(); ++k) {
            const double a = ch.h_antenna.col(k).norm();
            const double b = ch.h_bar.col(k).norm();
            worst = std::max(worst, std::abs(a - b) / a);
        }
    }
    return {"energy preservation in beamspace", worst < tol,
            fmt::format("max relative error {:.3e} over {} channels (tol {:.0e})", worst, instances, tol)};
}

inline CheckResult check_power_normalization(std::uint64_t seed, int instances = 50, double tol = 1e-8)
{
    Rng rng(seed);
    double worst = 0.0;
    const double rho = 100.0;
    for (int i = 0; i < instances; ++i) {
        const BeamspaceChannel ch = detail::small_instance(rng, 16, 6);
        BeamSet s;
        for (int k = 0; k < ch.n_users(); ++k) s.indices.push_back(k);
        const CMatrix f = zf_precoder(reduced_channel(ch, s), rho);
        worst = std::max(worst, std::abs(f.squaredNorm() - rho) / rho);
    }
    return {"ZF power normalization ||F_BB||_F^2 = rho", worst < tol,
            fmt::format("max relative error {:.3e} over {} instances (tol {:.0e})", worst, instances, tol)};
}

// The subset with the smallest trace metric is the sum-rate maximizer.
inline CheckResult check_trace_rate_equivalence(std::uint64_t seed, int instances = 100)
{
    Rng rng(seed);
    int agree = 0;
    for (int i = 0; i < instances; ++i) {
        const BeamspaceChannel ch = detail::small_instance(rng, 8, 3);
        const auto by_trace = oracle::min_trace_subset(ch.h_bar);
        std::vector<int> by_rate;
        double best_rate = -1.0;
        for (const auto &s : oracle::all_subsets(ch.n_antennas(), ch.n_users())) {
            const double r = sum_rate(reduced_channel(ch, BeamSet(s)), 100.0, 1.0, ch.n_users()).sum_rate;
            if (r > best_rate) {
                best_rate = r;
                by_rate = s;
            }
        }
        agree += by_trace.rows == by_rate ? 1 : 0;
    }
    return {"argmin trace == argmax sum rate (N <= 8, K <= 3)", agree == instances,
            fmt::format("{}/{} instances agree", agree, instances)};
}

inline CheckResult check_exhaustive_against_oracle(std::uint64_t seed, int instances = 50)
{
    Rng rng(seed);
    int agree = 0;
    for (int i = 0; i < instances; ++i) {
        const BeamspaceChannel ch = detail::small_instance(rng, 6, 3);
        const auto expected = oracle::min_trace_subset(ch.h_bar);
        const auto got = select_exhaustive(ch, 100.0, 1.0);
        const bool same_set = got.beams.indices == expected.rows;
        const bool same_value = std::abs(got.trace_metric - expected.value) <= 1e-9 * expected.value;
        agree += same_set && same_value ? 1 : 0;
    }
    return {"exhaustive selector == enumeration oracle (N <= 6)", agree == instances,
            fmt::format("{}/{} instances agree", agree, instances)};
}

inline std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 2024)
{
    return {check_unitarity(), check_parseval(seed), check_power_normalization(seed + 1),
            check_trace_rate_equivalence(seed + 2), check_exhaustive_against_oracle(seed + 3)};
}

} // namespace beamsel

#endif

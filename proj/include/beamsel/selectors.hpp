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

#ifndef BEAMSEL_SELECTORS_HPP
#define BEAMSEL_SELECTORS_HPP

#include "beamsel/precoding.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace beamsel {

// Matrix-inversion counts per scheme.
inline long long ia_inversions(long long n, long long k, long long k_bar)
{
    return (n - k) * k_bar + (k_bar * k_bar + k_bar) / 2;
}

inline long long aco_inversions(long long t_max, long long b_tol) { return t_max * b_tol; }

// C(n, k), saturating at uint64 max.
inline std::uint64_t binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 10'000'000;

// Strongest beam of user k, lowest index on ties.
inline int strongest_beam(const CMatrix &h_bar, Eigen::Index k)
{
    int best = 0;
    double best_mag = -1.0;
    for (Eigen::Index n = 0; n < h_bar.rows(); ++n) {
        const double mag = std::abs(h_bar(n, k));
        if (mag > best_mag) {
            best_mag = mag;
            best = static_cast<int>(n);
        }
    }
    return best;
}

namespace detail {

inline void finish_outcome(SelectionOutcome &out, const BeamspaceChannel &ch, double rho,
                           double sigma2, double sigma_reg)
{
    const RateReport r = sum_rate(reduced_channel(ch, out.beams), rho, sigma2,
                                  ch.n_users(), sigma_reg);
    out.trace_metric = r.trace_metric;
    out.sum_rate = r.sum_rate;
    out.regularized = r.regularized;
}

} // namespace detail

// Per-user strongest beam; collisions are kept as they are.
inline BeamSet mm1_beams(const BeamspaceChannel &ch)
{
    BeamSet s;
    s.indices.reserve(static_cast<std::size_t>(ch.n_users()));
    for (int k = 0; k < ch.n_users(); ++k)
        s.indices.push_back(strongest_beam(ch.h_bar, k));
    return s;
}

inline SelectionOutcome select_mm1(const BeamspaceChannel &ch, double rho, double sigma2,
                                   double sigma_reg = kDefaultRegularizer)
{
    SelectionOutcome out;
    out.scheme = Scheme::MM1;
    out.beams = mm1_beams(ch);
    out.duplicates = out.beams.has_duplicates();
    detail::finish_outcome(out, ch, rho, sigma2, sigma_reg);
    return out;
}

// Users whose strongest beam is shared with another user.
inline std::vector<bool> interference_users(const BeamSet &mm1, int n_beams)
{
    std::vector<int> claims(static_cast<std::size_t>(n_beams), 0);
    for (int b : mm1.indices) ++claims[static_cast<std::size_t>(b)];
    std::vector<bool> iu(mm1.size());
    for (std::size_t k = 0; k < mm1.size(); ++k)
        iu[k] = claims[static_cast<std::size_t>(mm1[k])] > 1;
    return iu;
}

// Interference-aware reselection. Non-colliding users keep their strongest
// beam; colliding users, in ascending user order, take the unclaimed beam that
// minimizes tr((G G^H + reg I)^-1) over the rows assigned so far plus the
// candidate.
inline SelectionOutcome select_ia(const BeamspaceChannel &ch, double rho, double sigma2,
                                  double sigma_reg = kDefaultRegularizer)
{
    const int n = ch.n_antennas();
    const int k_users = ch.n_users();
    SelectionOutcome out;
    out.scheme = Scheme::IA;
    out.beams = mm1_beams(ch);

    const std::vector<bool> iu = interference_users(out.beams, n);
    std::vector<bool> claimed(static_cast<std::size_t>(n), false);
    std::vector<int> rows;
    for (int k = 0; k < k_users; ++k) {
        if (!iu[static_cast<std::size_t>(k)]) {
            claimed[static_cast<std::size_t>(out.beams[k])] = true;
            rows.push_back(out.beams[k]);
        } else {
            ++out.interference_users;
        }
    }

    TraceInverse ws;
    for (int k = 0; k < k_users; ++k) {
        if (!iu[static_cast<std::size_t>(k)]) continue;
        const auto m = static_cast<Eigen::Index>(rows.size() + 1);
        CMatrix g(m, k_users);
        for (Eigen::Index r = 0; r + 1 < m; ++r) g.row(r) = ch.h_bar.row(rows[r]);

        int best_beam = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int b = 0; b < n; ++b) {
            if (claimed[static_cast<std::size_t>(b)]) continue;
            g.row(m - 1) = ch.h_bar.row(b);
            const double d = regularized_trace_inverse(g * g.adjoint(), sigma_reg, ws);
            ++out.inversion_count;
            if (d < best) {
                best = d;
                best_beam = b;
            }
        }
        out.beams[k] = best_beam;
        claimed[static_cast<std::size_t>(best_beam)] = true;
        rows.push_back(best_beam);
    }

    detail::finish_outcome(out, ch, rho, sigma2, sigma_reg);
    return out;
}

// Exact minimizer of the trace objective over all K-combinations of distinct
// beams, enumerated lexicographically with incremental Gram sums. Returns the
// combination in ascending order; the first (lexicographically smallest)
// minimizer wins ties.
inline SelectionOutcome select_exhaustive(const BeamspaceChannel &ch, double rho, double sigma2,
                                          double sigma_reg = kDefaultRegularizer,
                                          std::uint64_t budget = kDefaultExhaustiveBudget)
{
    const int n = ch.n_antennas();
    const int k = ch.n_users();
    const std::uint64_t combos = binomial(n, k);
    if (combos > budget)
        throw budget_exceeded(fmt::format("C({},{}) = {} exceeds exhaustive budget {}", n, k,
                                          combos, budget));

    std::vector<CMatrix> outer(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b)
        outer[static_cast<std::size_t>(b)] = ch.h_bar.row(b).adjoint() * ch.h_bar.row(b);

    // partial[d] is the Gram of the first d chosen rows.
    std::vector<CMatrix> partial(static_cast<std::size_t>(k + 1), CMatrix::Zero(k, k));
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::vector<int> best_pick;
    double best = std::numeric_limits<double>::infinity();
    TraceInverse ws;
    long long evaluated = 0;

    // Iterative lexicographic walk: pick[d] in [pick[d-1]+1, n-k+d].
    int depth = 0;
    pick[0] = 0;
    while (depth >= 0) {
        const auto d = static_cast<std::size_t>(depth);
        if (pick[d] > n - k + depth) {
            --depth;
            if (depth >= 0) ++pick[static_cast<std::size_t>(depth)];
            continue;
        }
        partial[d + 1].noalias() = partial[d] + outer[static_cast<std::size_t>(pick[d])];
        if (depth + 1 == k) {
            const double t = gram_trace(partial[d + 1], sigma_reg, ws).trace;
            ++evaluated;
            if (t < best) {
                best = t;
                best_pick = pick;
            }
            ++pick[d];
        } else {
            ++depth;
            pick[d + 1] = pick[d] + 1;
        }
    }

    SelectionOutcome out;
    out.scheme = Scheme::Exhaustive;
    out.beams = BeamSet(best_pick);
    out.inversion_count = evaluated;
    detail::finish_outcome(out, ch, rho, sigma2, sigma_reg);
    return out;
}

} // namespace beamsel

#endif

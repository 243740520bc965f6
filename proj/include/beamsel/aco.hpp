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

#ifndef BEAMSEL_ACO_HPP
#define BEAMSEL_ACO_HPP

#include "beamsel/selectors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace beamsel {

enum class AcoSelection {
    Argmax,    // take the most probable candidate (default)
    Roulette,  // sample from the selection probabilities
};

struct AcoParams {
    double a = 0.8;          // pheromone weight
    double q = 0.4;          // desirability weight
    double gamma = 0.3;      // pheromone decay, in (0, 1)
    double omega = 0.5;      // feedback increment weight
    double sigma_reg = kDefaultRegularizer;
    int t_max = 10;
    int b_k = 10;                     // uniform candidate count
    std::vector<int> b_k_per_user;    // overrides b_k when non-empty
    AcoSelection selection = AcoSelection::Argmax;

    [[nodiscard]] std::vector<int> candidate_counts(int k_users) const
    {
        if (b_k_per_user.empty()) return std::vector<int>(static_cast<std::size_t>(k_users), b_k);
        if (static_cast<int>(b_k_per_user.size()) != k_users)
            throw config_error("b_k_per_user must have one entry per user");
        return b_k_per_user;
    }

    void validate(int n_antennas, int k_users) const
    {
        if (a < 0.0 || q < 0.0) throw config_error("aco weights a, q must be nonnegative");
        if (!(gamma > 0.0 && gamma < 1.0)) throw config_error("aco gamma must lie in (0, 1)");
        if (!(omega > 0.0)) throw config_error("aco omega must be positive");
        if (!(sigma_reg > 0.0)) throw config_error("aco sigma_reg must be positive");
        if (t_max < 1) throw config_error("aco t_max must be positive");
        for (int b : candidate_counts(k_users))
            if (b < 1 || b > n_antennas) throw config_error("aco b_k must lie in [1, N]");
    }
};

// Per-user candidate lists: the B_k strongest beams, descending magnitude,
// lowest index first among equal magnitudes.
inline std::vector<std::vector<int>> build_candidates(const BeamspaceChannel &ch,
                                                      const std::vector<int> &counts)
{
    const int n = ch.n_antennas();
    std::vector<std::vector<int>> out(static_cast<std::size_t>(ch.n_users()));
    for (int k = 0; k < ch.n_users(); ++k) {
        const int bk = counts[static_cast<std::size_t>(k)];
        if (bk < 1 || bk > n) throw std::invalid_argument("build_candidates: B_k out of range");
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
            return std::abs(ch.h_bar(l, k)) > std::abs(ch.h_bar(r, k));
        });
        order.resize(static_cast<std::size_t>(bk));
        out[static_cast<std::size_t>(k)] = std::move(order);
    }
    return out;
}

// Regularized trace of the working set with user k's beam replaced by `beam`.
inline double utility(const BeamspaceChannel &ch, const BeamSet &working_set, int k, int beam,
                      double sigma_reg)
{
    BeamSet s = working_set;
    s[static_cast<std::size_t>(k)] = beam;
    const CMatrix h_s = reduced_channel(ch, s);
    return regularized_trace_inverse(h_s.adjoint() * h_s, sigma_reg);
}

// exp(-d / (2 N^2)), i.e. sqrt(1 / e^(d/N^2)).
inline double desirability(double d, int n_antennas)
{
    const double n2 = static_cast<double>(n_antennas) * n_antennas;
    return std::exp(-d / (2.0 * n2));
}

// p_b proportional to tau_b^a eta_b^q. A zero normalizer yields the uniform
// distribution.
inline std::vector<double> selection_probability(const std::vector<double> &tau,
                                                 const std::vector<double> &eta, double a,
                                                 double q)
{
    if (tau.size() != eta.size() || tau.empty())
        throw std::invalid_argument("selection_probability: size mismatch");
    std::vector<double> p(tau.size());
    double total = 0.0;
    for (std::size_t b = 0; b < tau.size(); ++b) {
        p[b] = std::pow(tau[b], a) * std::pow(eta[b], q);
        total += p[b];
    }
    if (!(total > 0.0)) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    for (double &v : p) v /= total;
    return p;
}

// tau' = (1 - gamma) tau + omega eta p, elementwise.
inline std::vector<double> pheromone_update(const std::vector<double> &tau,
                                            const std::vector<double> &eta,
                                            const std::vector<double> &p, double gamma,
                                            double omega)
{
    std::vector<double> out(tau.size());
    for (std::size_t b = 0; b < tau.size(); ++b)
        out[b] = (1.0 - gamma) * tau[b] + omega * eta[b] * p[b];
    return out;
}

struct AcoState {
    std::vector<std::vector<int>> candidates;
    std::vector<std::vector<double>> tau;
    BeamSet working_set;
    BeamSet best_set;
    double best_trace = std::numeric_limits<double>::infinity();
    long long inversion_count = 0;
};

namespace detail {

// Replaces repeated beams (later users yield) by the user's next unclaimed
// candidate, falling back to the strongest unclaimed beam overall.
inline bool resolve_duplicates(const BeamspaceChannel &ch,
                               const std::vector<std::vector<int>> &candidates, BeamSet &s)
{
    const int n = ch.n_antennas();
    std::vector<bool> claimed(static_cast<std::size_t>(n), false);
    std::vector<std::size_t> clashing;
    for (std::size_t k = 0; k < s.size(); ++k) {
        auto b = static_cast<std::size_t>(s[k]);
        if (claimed[b]) clashing.push_back(k);
        else claimed[b] = true;
    }
    for (std::size_t k : clashing) {
        int pick = -1;
        for (int b : candidates[k])
            if (!claimed[static_cast<std::size_t>(b)]) { pick = b; break; }
        if (pick < 0) {
            const auto all = build_candidates(ch, std::vector<int>(s.size(), n));
            for (int b : all[k])
                if (!claimed[static_cast<std::size_t>(b)]) { pick = b; break; }
        }
        s[k] = pick;
        claimed[static_cast<std::size_t>(pick)] = true;
    }
    return !clashing.empty();
}

} // namespace detail

// Ant-colony beam selection. Starts from the strongest-beam assignment and
// sweeps the users T_max times; each visit scores every candidate of the user
// by the regularized trace with that candidate swapped in, turns scores into
// probabilities weighted by the pheromone table, reinforces the table and
// commits the most probable candidate. The best working set ever accepted is
// returned. `rng` is only consulted in roulette mode.
inline SelectionOutcome select_aco(const BeamspaceChannel &ch, double rho, double sigma2,
                                   const AcoParams &params, Rng *rng = nullptr,
                                   bool record_history = false)
{
    const int n = ch.n_antennas();
    const int k_users = ch.n_users();
    params.validate(n, k_users);
    if (params.selection == AcoSelection::Roulette && rng == nullptr)
        throw std::invalid_argument("select_aco: roulette mode needs a random source");

    AcoState st;
    st.candidates = build_candidates(ch, params.candidate_counts(k_users));
    st.working_set = mm1_beams(ch);
    st.best_set = st.working_set;
    for (const auto &c : st.candidates) st.tau.emplace_back(c.size(), 1.0);

    std::vector<CMatrix> outer(static_cast<std::size_t>(n));
    auto outer_of = [&](int b) -> const CMatrix & {
        auto &o = outer[static_cast<std::size_t>(b)];
        if (o.size() == 0) o = ch.h_bar.row(b).adjoint() * ch.h_bar.row(b);
        return o;
    };

    SelectionOutcome out;
    out.scheme = Scheme::ACO;
    TraceInverse ws;
    CMatrix others(k_users, k_users);
    CMatrix gram(k_users, k_users);

    for (int t = 1; t <= params.t_max; ++t) {
        for (int k = 0; k < k_users; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const auto &cand = st.candidates[ku];
            others.setZero();
            for (int j = 0; j < k_users; ++j)
                if (j != k) others += outer_of(st.working_set[static_cast<std::size_t>(j)]);
            others.diagonal().array() += params.sigma_reg;

            std::vector<double> d(cand.size());
            std::vector<double> eta(cand.size());
            for (std::size_t b = 0; b < cand.size(); ++b) {
                gram.noalias() = others + outer_of(cand[b]);
                if (!ws.compute(gram, d[b]))
                    throw singular_matrix("ACO utility: regularized Gram not invertible");
                ++st.inversion_count;
                eta[b] = desirability(d[b], n);
            }
            const std::vector<double> p = selection_probability(st.tau[ku], eta, params.a, params.q);
            st.tau[ku] = pheromone_update(st.tau[ku], eta, p, params.gamma, params.omega);

            std::size_t b_max = 0;
            if (params.selection == AcoSelection::Roulette) {
                std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
                b_max = pick(*rng);
            } else {
                for (std::size_t b = 1; b < p.size(); ++b)
                    if (p[b] > p[b_max]) b_max = b;
            }

            st.working_set[ku] = cand[b_max];
            if (d[b_max] <= st.best_trace) {
                st.best_trace = d[b_max];
                st.best_set = st.working_set;
            }
            if (record_history)
                out.history.push_back({t, k, cand[b_max], d[b_max], st.best_trace});
        }
    }

    out.beams = st.best_set;
    out.inversion_count = st.inversion_count;
    out.duplicates = detail::resolve_duplicates(ch, st.candidates, out.beams);
    detail::finish_outcome(out, ch, rho, sigma2, params.sigma_reg);
    return out;
}

} // namespace beamsel

#endif

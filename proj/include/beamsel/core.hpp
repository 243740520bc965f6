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

#ifndef BEAMSEL_CORE_HPP
#define BEAMSEL_CORE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamsel {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Error types. Every beamsel failure derives from beamsel::error so callers
// can catch the family or a single condition.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gram factorization failed even after regularization.
struct singular_matrix : error {
    using error::error;
};

// Exhaustive search refused: C(N,K) above the configured budget.
struct budget_exceeded : error {
    using error::error;
};

// Aggregation over a cell without enough samples.
struct empty_cell : error {
    using error::error;
};

// Bad configuration file, preset name or parameter combination.
struct config_error : error {
    using error::error;
};

// Ordered beam assignment: position k holds the (0-based) beam index given
// to user k. Duplicates are allowed in intermediate states.
struct BeamSet {
    std::vector<int> indices;

    BeamSet() = default;
    explicit BeamSet(std::vector<int> idx) : indices(std::move(idx)) {}

    [[nodiscard]] std::size_t size() const noexcept { return indices.size(); }
    int &operator[](std::size_t k) { return indices[k]; }
    int operator[](std::size_t k) const { return indices[k]; }

    [[nodiscard]] bool has_duplicates() const
    {
        std::vector<int> sorted = indices;
        std::sort(sorted.begin(), sorted.end());
        return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    }

    friend bool operator==(const BeamSet &, const BeamSet &) = default;
};

enum class Scheme { MM1, IA, Exhaustive, ACO };

inline std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::MM1: return "mm1";
    case Scheme::IA: return "ia";
    case Scheme::Exhaustive: return "exhaustive";
    case Scheme::ACO: return "aco";
    }
    return "unknown";
}

inline Scheme scheme_from_string(const std::string &name)
{
    if (name == "mm1") return Scheme::MM1;
    if (name == "ia") return Scheme::IA;
    if (name == "exhaustive") return Scheme::Exhaustive;
    if (name == "aco") return Scheme::ACO;
    throw config_error("unknown scheme '" + name + "'");
}

// One ACO visit: iteration t (1-based), user k, chosen beam, its utility and
// the best-so-far trace after the acceptance test.
struct IterationRecord {
    int t = 0;
    int user = 0;
    int beam = 0;
    double utility = 0.0;
    double best_trace = 0.0;
};

struct SelectionOutcome {
    BeamSet beams;
    double trace_metric = 0.0;
    double sum_rate = 0.0;
    long long inversion_count = 0;
    Scheme scheme = Scheme::MM1;
    bool regularized = false;       // final rate used the regularized Gram
    bool duplicates = false;        // output carries (MM-1) or resolved (ACO) duplicate beams
    int interference_users = 0;     // IA: number of colliding users
    std::vector<IterationRecord> history;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace beamsel

#endif

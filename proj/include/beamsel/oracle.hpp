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

#ifndef BEAMSEL_ORACLE_HPP
#define BEAMSEL_ORACLE_HPP

// Reference routines for cross-checking the selectors. They share no code
// with the production path: plain nested vectors, Gauss-Jordan inversion,
// explicit sub-matrix construction, bitmask enumeration.

#include "beamsel/core.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <bit>
#include <algorithm>
#include <vector>

namespace beamsel::oracle {

using Dense = std::vector<std::vector<cplx>>;

inline Dense from_eigen(const CMatrix &m)
{
    Dense out(static_cast<std::size_t>(m.rows()), std::vector<cplx>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
    return out;
}

// Inverse by Gauss-Jordan elimination with partial pivoting. Empty result if
// a pivot vanishes relative to the matrix scale.
inline std::optional<Dense> invert(Dense a)
{
    const std::size_t n = a.size();
    double scale = 0.0;
    for (const auto &row : a)
        for (const auto &v : row) scale = std::max(scale, std::abs(v));
    Dense inv(n, std::vector<cplx>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) <= 1e-14 * scale) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const cplx d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = a[r][col];
            if (f == cplx{}) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// tr((S^H S)^-1) for the rows `rows` of h_bar; +inf if singular.
inline double subset_trace(const CMatrix &h_bar, const std::vector<int> &rows)
{
    const std::size_t k = static_cast<std::size_t>(h_bar.cols());
    Dense gram(k, std::vector<cplx>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (int r : rows)
                gram[i][j] += std::conj(h_bar(r, static_cast<Eigen::Index>(i))) *
                              h_bar(r, static_cast<Eigen::Index>(j));
    const auto inv = invert(gram);
    if (!inv) return std::numeric_limits<double>::infinity();
    double t = 0.0;
    for (std::size_t i = 0; i < k; ++i) t += (*inv)[i][i].real();
    return t;
}

// Every K-subset of {0..N-1} in lexicographic order, from bit patterns.
inline std::vector<std::vector<int>> all_subsets(int n, int k)
{
    std::vector<std::vector<int>> out;
    for (unsigned long long mask = 0; mask < (1ULL << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        std::vector<int> s;
        for (int b = 0; b < n; ++b)
            if (mask & (1ULL << b)) s.push_back(b);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Best {
    std::vector<int> rows;
    double value = 0.0;
};

// Brute-force minimizer of the trace metric; first minimizer in
// lexicographic order.
inline Best min_trace_subset(const CMatrix &h_bar)
{
    Best best{{}, std::numeric_limits<double>::infinity()};
    for (const auto &s : all_subsets(static_cast<int>(h_bar.rows()), static_cast<int>(h_bar.cols()))) {
        const double t = subset_trace(h_bar, s);
        if (t < best.value) best = {s, t};
    }
    return best;
}

} // namespace beamsel::oracle

#endif

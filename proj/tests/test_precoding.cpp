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

#include "beamsel/oracle.hpp"
#include "beamsel/precoding.hpp"

#include <gtest/gtest.h>

using namespace beamsel;

namespace {

CMatrix random_matrix(Rng &rng, int rows, int cols)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
    return m;
}

} // namespace

TEST(BeamSetTest, Duplicates)
{
    EXPECT_FALSE(BeamSet({0, 1, 2}).has_duplicates());
    EXPECT_TRUE(BeamSet({0, 0}).has_duplicates());
    EXPECT_TRUE(BeamSet({4, 1, 4}).has_duplicates());
}

TEST(ReducedChannel, IdentitySelection)
{
    const CMatrix eye = CMatrix::Identity(3, 3);
    EXPECT_EQ(reduced_channel(eye, BeamSet({0, 1, 2})), eye);
}

TEST(ReducedChannel, RowPermutation)
{
    const CMatrix eye = CMatrix::Identity(3, 3);
    CMatrix expected(3, 3);
    expected << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    EXPECT_EQ(reduced_channel(eye, BeamSet({1, 0, 2})), expected);
}

TEST(ReducedChannel, DuplicateRows)
{
    CMatrix h(3, 2);
    h << 1, 2, 3, 4, 5, 6;
    const BeamSet s({0, 0});
    const CMatrix r = reduced_channel(h, s);
    EXPECT_EQ(r.row(0), r.row(1));
    EXPECT_TRUE(s.has_duplicates());
}

TEST(ReducedChannel, OutOfRange)
{
    const CMatrix eye = CMatrix::Identity(3, 3);
    EXPECT_THROW(reduced_channel(eye, BeamSet({0, 3})), std::out_of_range);
    EXPECT_THROW(reduced_channel(eye, BeamSet({-1, 0})), std::out_of_range);
}

TEST(ZfScaling, Identity)
{
    const ZfScaling z = zf_scaling(CMatrix::Identity(2, 2), 4.0, 0.0);
    EXPECT_NEAR(z.trace_metric, 2.0, 1e-14);
    EXPECT_NEAR(z.alpha, std::sqrt(2.0), 1e-14);
    EXPECT_FALSE(z.regularized);
}

TEST(ZfScaling, ScaledIdentity)
{
    const ZfScaling z = zf_scaling(2.0 * CMatrix::Identity(2, 2), 4.0, 0.0);
    EXPECT_NEAR(z.trace_metric, 0.5, 1e-14);
    EXPECT_NEAR(z.alpha, std::sqrt(8.0), 1e-14);
}

TEST(ZfScaling, IllConditionedFallsBackToRegularizer)
{
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = 1e-9;
    // 1/(1 + 1e-3) + 1/(1e-18 + 1e-3)
    const double expected = 1.0 / 1.001 + 1.0 / (1e-18 + 1e-3);
    const ZfScaling z = zf_scaling(h, 1.0, 1e-3);
    EXPECT_TRUE(z.regularized);
    EXPECT_NEAR(z.trace_metric, expected, 1e-9);
    EXPECT_NEAR(z.trace_metric, 1001.0, 0.01);
}

TEST(ZfScaling, SingularWithoutRegularizerThrows)
{
    CMatrix h(2, 2);
    h << 1, 1, 1, 1;
    EXPECT_THROW(zf_scaling(h, 1.0, 0.0), singular_matrix);
    EXPECT_NO_THROW(zf_scaling(h, 1.0, 1e-3));
}

TEST(ZfScaling, BadArguments)
{
    EXPECT_THROW(zf_scaling(CMatrix::Identity(2, 2), 0.0), std::invalid_argument);
    EXPECT_THROW(zf_scaling(CMatrix::Identity(2, 2), 1.0, -1.0), std::invalid_argument);
}

TEST(ZfScaling, ModeratelyConditionedStaysExact)
{
    // Gram diag(1, ..., 1, 2e-12), K = 10: cond = 5e11 is below the limit but
    // tr(A) tr(A^-1) = 5e12 is not, so the eigenvalue check decides.
    CMatrix h = CMatrix::Identity(10, 10);
    h(9, 9) = std::sqrt(2e-12);
    const ZfScaling z = zf_scaling(h, 1.0);
    EXPECT_FALSE(z.regularized);
    EXPECT_NEAR(z.trace_metric, 9.0 + 5e11, 1e-6 * 5e11);
}

TEST(SumRate, ClosedForm)
{
    const RateReport r = sum_rate(CMatrix::Identity(2, 2), 4.0, 1.0, 2);
    EXPECT_NEAR(r.alpha * r.alpha, 2.0, 1e-14);
    ASSERT_EQ(r.per_user_rate.size(), 2u);
    EXPECT_NEAR(r.per_user_rate[0], 1.0, 1e-14);
    EXPECT_NEAR(r.sum_rate, 2.0, 1e-14);
}

TEST(SumRate, VanishingPower)
{
    const RateReport r = sum_rate(CMatrix::Identity(3, 3), 1e-12, 1.0, 3);
    EXPECT_LT(r.sum_rate, 1e-11);
}

TEST(SumRate, UnitRatePerUser)
{
    // rho = K sigma2 K gives alpha^2 = sigma2 K, hence R_k = 1.
    for (int k : {1, 2, 5, 9}) {
        const double sigma2 = 0.7;
        const RateReport r = sum_rate(CMatrix::Identity(k, k), k * sigma2 * k, sigma2, k);
        for (double rk : r.per_user_rate) EXPECT_NEAR(rk, 1.0, 1e-13);
        EXPECT_NEAR(r.sum_rate, k, 1e-12);
    }
}

TEST(SumRate, ConsistentWithTrace)
{
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const CMatrix h = random_matrix(rng, 4, 4);
        const RateReport r = sum_rate(h, 50.0, 2.0, 4);
        double total = 0.0;
        for (double v : r.per_user_rate) total += v;
        EXPECT_NEAR(total, r.sum_rate, 1e-12);
        EXPECT_NEAR(r.sum_rate, sum_rate_from_trace(r.trace_metric, 50.0, 2.0, 4), 1e-12);
        EXPECT_GT(r.trace_metric, 0.0);
    }
}

TEST(SumRate, UserPermutationInvariant)
{
    Rng rng(6);
    const CMatrix h = random_matrix(rng, 3, 3);
    Eigen::PermutationMatrix<3> perm;
    perm.indices() << 2, 0, 1;
    const double a = sum_rate(h, 10.0, 1.0, 3).sum_rate;
    const double b = sum_rate(h * perm, 10.0, 1.0, 3).sum_rate;
    EXPECT_NEAR(a, b, 1e-12);
}

TEST(SumRate, StrictlyDecreasingInTrace)
{
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0.1; t < 1e4; t *= 1.7) {
        const double r = sum_rate_from_trace(t, 100.0, 1.0, 4);
        EXPECT_LT(r, prev);
        prev = r;
    }
}

TEST(TraceObjective, OrthonormalRows)
{
    BeamspaceChannel ch;
    ch.h_bar = CMatrix::Zero(5, 3);
    ch.h_bar(1, 0) = 1.0;
    ch.h_bar(3, 1) = cplx(0.0, 1.0);
    ch.h_bar(4, 2) = -1.0;
    EXPECT_NEAR(trace_objective(ch, BeamSet({1, 3, 4})), 3.0, 1e-14);
    EXPECT_NEAR(trace_objective(ch, BeamSet({4, 1, 3})), 3.0, 1e-14);
}

TEST(TraceObjective, PermutationInvariant)
{
    Rng rng(9);
    BeamspaceChannel ch;
    ch.h_bar = random_matrix(rng, 8, 3);
    const double t = trace_objective(ch, BeamSet({1, 5, 6}));
    EXPECT_NEAR(trace_objective(ch, BeamSet({6, 1, 5})), t, 1e-12 * t);
    EXPECT_NEAR(trace_objective(ch, BeamSet({5, 6, 1})), t, 1e-12 * t);
}

TEST(TraceObjective, MatchesGaussJordanOracle)
{
    Rng rng(10);
    for (int i = 0; i < 30; ++i) {
        BeamspaceChannel ch;
        ch.h_bar = random_matrix(rng, 7, 3);
        const std::vector<int> rows{0, 2, 5};
        EXPECT_NEAR(trace_objective(ch, BeamSet(rows)), oracle::subset_trace(ch.h_bar, rows),
                    1e-9 * oracle::subset_trace(ch.h_bar, rows));
    }
}

TEST(TraceObjective, ArgminTraceIsArgmaxRate)
{
    // N = 4, K = 2: all 6 subsets.
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        BeamspaceChannel ch;
        ch.h_bar = random_matrix(rng, 4, 2);
        std::vector<int> by_trace, by_rate;
        double best_t = std::numeric_limits<double>::infinity(), best_r = -1.0;
        for (const auto &s : oracle::all_subsets(4, 2)) {
            ASSERT_EQ(oracle::all_subsets(4, 2).size(), 6u);
            const double t = trace_objective(ch, BeamSet(s));
            const double r = sum_rate(reduced_channel(ch, BeamSet(s)), 100.0, 1.0, 2).sum_rate;
            if (t < best_t) { best_t = t; by_trace = s; }
            if (r > best_r) { best_r = r; by_rate = s; }
        }
        EXPECT_EQ(by_trace, by_rate);
    }
}

TEST(ZfPrecoder, PowerNormalization)
{
    Rng rng(12);
    for (int k : {1, 2, 4, 8}) {
        const CMatrix h = random_matrix(rng, k, k);
        const CMatrix f = zf_precoder(h, 31.6);
        EXPECT_NEAR(f.squaredNorm(), 31.6, 1e-8 * 31.6);
        // Zero forcing: H^H F is a scaled identity.
        const CMatrix eff = h.adjoint() * f;
        EXPECT_LT((eff - eff(0, 0) * CMatrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(RegularizedTrace, FiniteForAnyInput)
{
    const CMatrix zero = CMatrix::Zero(3, 3);
    EXPECT_NEAR(regularized_trace_inverse(zero, 1e-3), 3000.0, 1e-9);
    CMatrix rank1(3, 3);
    rank1.setOnes();
    EXPECT_TRUE(std::isfinite(regularized_trace_inverse(rank1, 1e-3)));
}

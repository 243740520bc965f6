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

#ifndef BEAMSEL_PRECODING_HPP
#define BEAMSEL_PRECODING_HPP

#include "beamsel/channel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace beamsel {

// Default regularizer for Gram inversion.
inline constexpr double kDefaultRegularizer = 1e-3;

// Condition number above which a Gram matrix is treated as rank deficient.
inline constexpr double kConditionLimit = 1e12;

struct GramTrace {
    double trace = 0.0;
    bool regularized = false;
};

// Factorizes a Hermitian positive (semi)definite matrix and returns tr(A^-1).
// tr(A^-1) = ||L^-1||_F^2 for A = L L^H. The workspace is reused across calls
// of equal dimension.
class TraceInverse {
public:
    // Returns false if the Cholesky factorization breaks down.
    bool compute(const CMatrix &a, double &trace)
    {
        llt_.compute(a);
        if (llt_.info() != Eigen::Success) return false;
        const auto n = a.rows();
        inv_.setIdentity(n, n);
        llt_.matrixL().solveInPlace(inv_);
        trace = inv_.squaredNorm();
        return std::isfinite(trace) && trace > 0.0;
    }

private:
    Eigen::LLT<CMatrix> llt_;
    CMatrix inv_;
};

// tr((A + reg I)^-1). Throws singular_matrix when the factorization fails.
inline double regularized_trace_inverse(const CMatrix &gram, double reg, TraceInverse &ws)
{
    CMatrix a = gram;
    a.diagonal().array() += reg;
    double t = 0.0;
    if (!ws.compute(a, t))
        throw singular_matrix("Gram matrix not invertible even with regularization");
    return t;
}

inline double regularized_trace_inverse(const CMatrix &gram, double reg)
{
    TraceInverse ws;
    return regularized_trace_inverse(gram, reg, ws);
}

// tr(A^-1) with exact inversion when A is certifiably well conditioned, else
// tr((A + reg I)^-1) with the result flagged.
//
// cond(A) <= tr(A) tr(A^-1) for Hermitian positive definite A, so the cheap
// bound certifies most matrices; only borderline ones pay for an eigen solve.
inline GramTrace gram_trace(const CMatrix &gram, double reg, TraceInverse &ws)
{
    double t = 0.0;
    if (ws.compute(gram, t)) {
        const double tr = gram.diagonal().real().sum();
        if (tr * t < kConditionLimit) return {t, false};
        Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
        const RVector &ev = es.eigenvalues();
        if (es.info() == Eigen::Success && ev.minCoeff() > 0.0 &&
            ev.maxCoeff() / ev.minCoeff() < kConditionLimit)
            return {(1.0 / ev.array()).sum(), false};
    }
    if (!(reg > 0.0)) throw singular_matrix("Gram matrix is rank deficient and no regularizer is set");
    return {regularized_trace_inverse(gram, reg, ws), true};
}

inline GramTrace gram_trace(const CMatrix &gram, double reg = kDefaultRegularizer)
{
    TraceInverse ws;
    return gram_trace(gram, reg, ws);
}

// Rows of H_bar picked by the beam set, in user order.
inline CMatrix reduced_channel(const CMatrix &h_bar, const BeamSet &s)
{
    CMatrix out(static_cast<Eigen::Index>(s.size()), h_bar.cols());
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] < 0 || s[j] >= h_bar.rows())
            throw std::out_of_range("reduced_channel: beam index out of range");
        out.row(static_cast<Eigen::Index>(j)) = h_bar.row(s[j]);
    }
    return out;
}

inline CMatrix reduced_channel(const BeamspaceChannel &ch, const BeamSet &s)
{
    return reduced_channel(ch.h_bar, s);
}

struct ZfScaling {
    double alpha = 0.0;
    double trace_metric = 0.0;
    bool regularized = false;
};

// Power normalization of the ZF precoder: alpha = sqrt(rho / tr((Hs^H Hs)^-1)).
inline ZfScaling zf_scaling(const CMatrix &h_s, double rho, double sigma_reg = kDefaultRegularizer)
{
    if (!(rho > 0.0)) throw std::invalid_argument("zf_scaling: rho must be positive");
    if (sigma_reg < 0.0) throw std::invalid_argument("zf_scaling: regularizer must be nonnegative");
    const GramTrace g = gram_trace(h_s.adjoint() * h_s, sigma_reg);
    return {std::sqrt(rho / g.trace), g.trace, g.regularized};
}

struct RateReport {
    double alpha = 0.0;
    std::vector<double> per_user_rate;
    double sum_rate = 0.0;
    double trace_metric = 0.0;
    bool regularized = false;
};

// Equal-power ZF rates from an already evaluated trace metric.
inline double sum_rate_from_trace(double trace_metric, double rho, double sigma2, int k_users)
{
    const double per_user = std::log2(1.0 + rho / trace_metric / (sigma2 * k_users));
    return k_users * per_user;
}

// Every user gets log2(1 + alpha^2 / (sigma2 K)).
inline RateReport sum_rate(const CMatrix &h_s, double rho, double sigma2, int k_users,
                           double sigma_reg = kDefaultRegularizer)
{
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sum_rate: sigma2 must be positive");
    if (k_users < 1) throw std::invalid_argument("sum_rate: k_users must be positive");
    const ZfScaling z = zf_scaling(h_s, rho, sigma_reg);
    RateReport r;
    r.alpha = z.alpha;
    r.trace_metric = z.trace_metric;
    r.regularized = z.regularized;
    const double rk = std::log2(1.0 + z.alpha * z.alpha / (sigma2 * k_users));
    r.per_user_rate.assign(static_cast<std::size_t>(k_users), rk);
    r.sum_rate = rk * k_users;
    return r;
}

// Lower is better; strictly decreasing map to sum rate at fixed rho, sigma2, K.
inline double trace_objective(const BeamspaceChannel &ch, const BeamSet &s,
                              double sigma_reg = kDefaultRegularizer)
{
    const CMatrix h_s = reduced_channel(ch, s);
    return gram_trace(h_s.adjoint() * h_s, sigma_reg).trace;
}

// alpha Hs (Hs^H Hs)^-1. Only used to check the power normalization.
inline CMatrix zf_precoder(const CMatrix &h_s, double rho)
{
    const CMatrix gram = h_s.adjoint() * h_s;
    const CMatrix inv = gram.llt().solve(CMatrix::Identity(gram.rows(), gram.cols()));
    const double alpha = std::sqrt(rho / inv.trace().real());
    return alpha * h_s * inv;
}

} // namespace beamsel

#endif

#ifndef EDAPNC_CAPACITY_HPP
#define EDAPNC_CAPACITY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "edapnc/channel.hpp"
#include "edapnc/linalg.hpp"

namespace edapnc {

struct CovariancePair
{
    Eigen::MatrixXd q_a;
    Eigen::MatrixXd q_b;
};

struct RelayCovariance
{
    Eigen::MatrixXd q_r;
    double objective = 0.0; // weighted downlink rate at q_r, in bits
    bool converged = true;
    int iterations = 0;
};

/// ½·log2 det(I + H Q Hᵀ) in bits per channel use. Q must be symmetric PSD.
inline double mimo_rate(const Eigen::MatrixXd& h, const Eigen::MatrixXd& q)
{
    if (q.rows() != q.cols() || h.cols() != q.rows())
        throw std::invalid_argument("mimo_rate: dimension mismatch");
    if (!is_psd(q))
        throw std::domain_error("mimo_rate: covariance is not positive semidefinite");
    return half_log2_det_identity_plus(h * q * h.transpose());
}

namespace detail {

// Water-filling powers p_i = [w_i*level - 1/gain_i]^+ with the level chosen by
// bisection so that the total power meets the budget. gains and weights are
// concatenated across users; entries with zero weight stay at zero power.
inline Eigen::VectorXd waterfill_weighted(const Eigen::VectorXd& gains,
                                          const Eigen::VectorXd& weights, double budget)
{
    const auto total_at = [&](double level) {
        double t = 0.0;
        for (Eigen::Index i = 0; i < gains.size(); ++i)
            if (weights(i) > 0.0)
                t += std::max(weights(i) * level - 1.0 / gains(i), 0.0);
        return t;
    };
    if (weights.maxCoeff() <= 0.0)
        return Eigen::VectorXd::Zero(gains.size());
    double hi = 1.0;
    while (total_at(hi) < budget)
        hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it)
    {
        double mid = 0.5 * (lo + hi);
        (total_at(mid) < budget ? lo : hi) = mid;
    }
    double level = 0.5 * (lo + hi);
    Eigen::VectorXd p(gains.size());
    for (Eigen::Index i = 0; i < gains.size(); ++i)
        p(i) = weights(i) > 0.0 ? std::max(weights(i) * level - 1.0 / gains(i), 0.0) : 0.0;
    return p;
}

} // namespace detail

/// Maximizes alpha·R_A + (1-alpha)·R_B over the uplink covariances under the
/// joint trace budget Tr(Q_A)+Tr(Q_B) <= p_t. The optimum diagonalizes along
/// each channel's right-singular vectors, which reduces the problem to
/// weighted water-filling across the stacked singular values of both links.
inline CovariancePair optimize_uplink_covariances(const Eigen::MatrixXd& h_ar,
                                                  const Eigen::MatrixXd& h_br, double p_t,
                                                  double alpha)
{
    if (!(p_t > 0.0))
        throw std::invalid_argument("optimize_uplink_covariances: p_t must be > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("optimize_uplink_covariances: alpha must be in [0,1]");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd_a(h_ar, Eigen::ComputeThinV);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_b(h_br, Eigen::ComputeThinV);
    const Eigen::Index ka = svd_a.singularValues().size();
    const Eigen::Index kb = svd_b.singularValues().size();

    Eigen::VectorXd gains(ka + kb), weights(ka + kb);
    gains.head(ka) = svd_a.singularValues().array().square();
    gains.tail(kb) = svd_b.singularValues().array().square();
    weights.head(ka).setConstant(alpha);
    weights.tail(kb).setConstant(1.0 - alpha);

    Eigen::VectorXd p = detail::waterfill_weighted(gains, weights, p_t);

    CovariancePair out;
    out.q_a = svd_a.matrixV() * p.head(ka).asDiagonal() * svd_a.matrixV().transpose();
    out.q_b = svd_b.matrixV() * p.tail(kb).asDiagonal() * svd_b.matrixV().transpose();
    return out;
}

namespace detail {

// Shift tau with Σ max(v_i - tau, 0) = budget, for Σ max(v_i, 0) > budget.
inline double simplex_shift(Eigen::VectorXd vals, double budget)
{
    std::sort(vals.data(), vals.data() + vals.size(), std::greater<double>());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
    {
        acc += vals(i);
        double t = (acc - budget) / static_cast<double>(i + 1);
        if (i + 1 == vals.size() || t >= vals(i + 1))
            return t;
    }
    return 0.0; // unreachable for a binding cap
}

// Euclidean projection of a symmetric matrix onto {Q PSD, Tr(Q) <= budget}:
// project the eigenvalues onto the trace-capped orthant (clip, plus a uniform
// shift when the cap binds). The exact projection matters — a multiplicative
// trace rescale admits non-stationary fixed points of the gradient iteration.
inline Eigen::MatrixXd project_to_trace_ball(const Eigen::MatrixXd& m, double budget)
{
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    Eigen::VectorXd vals = eig.eigenvalues();
    if (vals.cwiseMax(0.0).sum() <= budget)
        vals = vals.cwiseMax(0.0);
    else
        vals = (vals.array() - simplex_shift(vals, budget)).cwiseMax(0.0);
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

// d/dQ of ½log2 det(I + H Q Hᵀ), i.e. (1/(2 ln 2))·Hᵀ(I + H Q Hᵀ)⁻¹H.
inline Eigen::MatrixXd half_log2_det_gradient(const Eigen::MatrixXd& h, const Eigen::MatrixXd& q)
{
    Eigen::MatrixXd inner = h * q * h.transpose();
    inner.diagonal().array() += 1.0;
    Eigen::MatrixXd solved = inner.llt().solve(h);
    return (0.5 * kLog2E) * h.transpose() * solved;
}

} // namespace detail

/// Maximizes alpha·½log2det(I + H_rb Q H_rbᵀ) + (1-alpha)·½log2det(I + H_ra Q H_raᵀ)
/// over PSD Q with Tr(Q) <= p_r, by projected gradient ascent with a
/// backtracking step. The alpha weight sits on the H_rb term because that
/// term caps user A's downlink rate. Non-convergence is flagged, never thrown.
inline RelayCovariance optimize_relay_covariance(
    const Eigen::MatrixXd& h_ra, const Eigen::MatrixXd& h_rb, double p_r, double alpha,
    const std::optional<Eigen::MatrixXd>& q_init = std::nullopt, double tol = 1e-8,
    int max_iter = 10000)
{
    if (!(p_r > 0.0))
        throw std::invalid_argument("optimize_relay_covariance: p_r must be > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("optimize_relay_covariance: alpha must be in [0,1]");
    const Eigen::Index n = h_ra.cols();
    if (h_rb.cols() != n)
        throw std::invalid_argument("optimize_relay_covariance: dimension mismatch");

    const auto objective = [&](const Eigen::MatrixXd& q) {
        double v = 0.0;
        if (alpha > 0.0)
            v += alpha * half_log2_det_identity_plus(h_rb * q * h_rb.transpose());
        if (alpha < 1.0)
            v += (1.0 - alpha) * half_log2_det_identity_plus(h_ra * q * h_ra.transpose());
        return v;
    };

    RelayCovariance out;
    out.q_r = q_init ? detail::project_to_trace_ball(*q_init, p_r)
                     : Eigen::MatrixXd((p_r / static_cast<double>(n)) *
                                       Eigen::MatrixXd::Identity(n, n));
    double f = objective(out.q_r);
    double step = p_r;
    out.converged = false;
    bool done = false;
    int stall = 0; // consecutive sub-tol gains; a single one can just mean a
                   // backtracked step, not stationarity
    for (int it = 0; it < max_iter && !done; ++it)
    {
        out.iterations = it + 1;
        Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
        if (alpha > 0.0)
            grad += alpha * detail::half_log2_det_gradient(h_rb, out.q_r);
        if (alpha < 1.0)
            grad += (1.0 - alpha) * detail::half_log2_det_gradient(h_ra, out.q_r);

        bool accepted = false;
        while (step > 1e-16 * p_r)
        {
            Eigen::MatrixXd trial = detail::project_to_trace_ball(out.q_r + step * grad, p_r);
            double f_trial = objective(trial);
            if (f_trial > f)
            {
                stall = (f_trial - f < tol) ? stall + 1 : 0;
                out.q_r = std::move(trial);
                f = f_trial;
                step *= 1.5;
                accepted = true;
                if (stall >= 10)
                {
                    out.converged = true;
                    done = true;
                }
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
        {
            out.converged = true; // no ascent step left at machine resolution
            done = true;
        }
    }
    out.objective = f;
    return out;
}

/// Cut-set upper bound on the achievable rate pair, with covariances chosen
/// by the alpha-weighted optimizations above and the per-user min applied
/// afterwards. Pass a precomputed relay covariance to share it across schemes.
inline RatePair capacity_ub_pair(const ChannelSet& cs, const PowerConfig& pc, double alpha,
                                 const std::optional<RelayCovariance>& relay = std::nullopt)
{
    validate(pc);
    CovariancePair up = optimize_uplink_covariances(cs.h_ar, cs.h_br, pc.p_t, alpha);
    RelayCovariance down =
        relay ? *relay : optimize_relay_covariance(cs.h_ra, cs.h_rb, pc.p_r, alpha);
    RatePair uplink{mimo_rate(cs.h_ar, up.q_a), mimo_rate(cs.h_br, up.q_b)};
    RatePair downlink{mimo_rate(cs.h_rb, down.q_r), mimo_rate(cs.h_ra, down.q_r)};
    return uplink.min_with(downlink);
}

} // namespace edapnc

#endif

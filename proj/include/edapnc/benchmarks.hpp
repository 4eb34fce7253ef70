#ifndef EDAPNC_BENCHMARKS_HPP
#define EDAPNC_BENCHMARKS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edapnc/capacity.hpp"
#include "edapnc/channel.hpp"
#include "edapnc/wsr.hpp"

namespace edapnc {

/// Boundary trace of one scheme: (alpha, rate pair) samples with strictly
/// increasing alpha.
struct RateRegion
{
    std::string scheme;
    std::vector<std::pair<double, RatePair>> points;
};

struct MacSolution
{
    Eigen::MatrixXd q_a;
    Eigen::MatrixXd q_b;
    double r_a = 0.0; // boundary point of the two-user outer bound
    double r_b = 0.0;
    bool converged = true;
};

namespace detail {

inline double mac_sum_rate(const Eigen::MatrixXd& h_ar, const Eigen::MatrixXd& h_br,
                           const Eigen::MatrixXd& q_a, const Eigen::MatrixXd& q_b)
{
    return half_log2_det_identity_plus(h_ar * q_a * h_ar.transpose() +
                                       h_br * q_b * h_br.transpose());
}

} // namespace detail

/// Weighted boundary point of the standard two-user Gaussian MAC outer bound
/// {R_a <= I_a, R_b <= I_b, R_a+R_b <= I_ab} under Tr(Q_a)+Tr(Q_b) <= p_t,
/// found by projected gradient ascent over the covariance pair. For
/// alpha > 1/2 the A-priority corner of the pentagon is returned, for
/// alpha < 1/2 the B-priority one; at alpha = 1/2 the sum-rate face is split
/// as evenly as the pentagon allows.
inline MacSolution optimize_mac_wsr(const Eigen::MatrixXd& h_ar, const Eigen::MatrixXd& h_br,
                                    double p_t, double alpha, double tol = 1e-8,
                                    int max_iter = 10000)
{
    if (!(p_t > 0.0))
        throw std::invalid_argument("optimize_mac_wsr: p_t must be > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("optimize_mac_wsr: alpha must be in [0,1]");
    const Eigen::Index n = h_ar.cols();
    if (h_br.cols() != n)
        throw std::invalid_argument("optimize_mac_wsr: dimension mismatch");

    // For alpha >= 1/2 the pentagon corner value is
    //   (2a-1)·I_a(Q_a) + (1-a)·I_ab(Q_a,Q_b),
    // concave in (Q_a, Q_b); the mirrored expression covers alpha < 1/2.
    const bool a_priority = alpha >= 0.5;
    const double w_single = a_priority ? 2.0 * alpha - 1.0 : 1.0 - 2.0 * alpha;
    const double w_joint = a_priority ? 1.0 - alpha : alpha;
    const Eigen::MatrixXd& h_single = a_priority ? h_ar : h_br;

    const auto objective = [&](const Eigen::MatrixXd& q_a, const Eigen::MatrixXd& q_b) {
        double v = w_joint * detail::mac_sum_rate(h_ar, h_br, q_a, q_b);
        if (w_single > 0.0)
            v += w_single *
                 half_log2_det_identity_plus(h_single * (a_priority ? q_a : q_b) *
                                             h_single.transpose());
        return v;
    };

    MacSolution out;
    out.q_a = (0.5 * p_t / n) * Eigen::MatrixXd::Identity(n, n);
    out.q_b = out.q_a;
    double f = objective(out.q_a, out.q_b);
    double step = p_t;
    out.converged = false;
    bool done = false;
    int stall = 0;
    for (int it = 0; it < max_iter && !done; ++it)
    {
        Eigen::MatrixXd joint = h_ar * out.q_a * h_ar.transpose() +
                                h_br * out.q_b * h_br.transpose();
        joint.diagonal().array() += 1.0;
        Eigen::MatrixXd joint_inv_a = joint.llt().solve(h_ar);
        Eigen::MatrixXd joint_inv_b = joint.llt().solve(h_br);
        Eigen::MatrixXd grad_a = (0.5 * kLog2E * w_joint) * h_ar.transpose() * joint_inv_a;
        Eigen::MatrixXd grad_b = (0.5 * kLog2E * w_joint) * h_br.transpose() * joint_inv_b;
        if (w_single > 0.0)
        {
            Eigen::MatrixXd& grad_s = a_priority ? grad_a : grad_b;
            const Eigen::MatrixXd& q_s = a_priority ? out.q_a : out.q_b;
            grad_s += w_single * detail::half_log2_det_gradient(h_single, q_s);
        }

        bool accepted = false;
        while (step > 1e-16 * p_t)
        {
            // exact joint projection onto {both PSD, Tr(Q_a)+Tr(Q_b) <= p_t}:
            // one shared shift across the concatenated eigenvalues
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(
                0.5 * (out.q_a + out.q_a.transpose()) + step * 0.5 *
                    (grad_a + grad_a.transpose()));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(
                0.5 * (out.q_b + out.q_b.transpose()) + step * 0.5 *
                    (grad_b + grad_b.transpose()));
            Eigen::VectorXd va = ea.eigenvalues();
            Eigen::VectorXd vb = eb.eigenvalues();
            if (va.cwiseMax(0.0).sum() + vb.cwiseMax(0.0).sum() <= p_t)
            {
                va = va.cwiseMax(0.0);
                vb = vb.cwiseMax(0.0);
            }
            else
            {
                Eigen::VectorXd joint(va.size() + vb.size());
                joint << va, vb;
                double tau = detail::simplex_shift(joint, p_t);
                va = (va.array() - tau).cwiseMax(0.0);
                vb = (vb.array() - tau).cwiseMax(0.0);
            }
            Eigen::MatrixXd ta =
                ea.eigenvectors() * va.asDiagonal() * ea.eigenvectors().transpose();
            Eigen::MatrixXd tb =
                eb.eigenvectors() * vb.asDiagonal() * eb.eigenvectors().transpose();
            double f_trial = objective(ta, tb);
            if (f_trial > f)
            {
                stall = (f_trial - f < tol) ? stall + 1 : 0;
                out.q_a = std::move(ta);
                out.q_b = std::move(tb);
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
            out.converged = true;
            done = true;
        }
    }

    double i_a = half_log2_det_identity_plus(h_ar * out.q_a * h_ar.transpose());
    double i_b = half_log2_det_identity_plus(h_br * out.q_b * h_br.transpose());
    double i_ab = detail::mac_sum_rate(h_ar, h_br, out.q_a, out.q_b);
    if (alpha > 0.5)
    {
        out.r_a = i_a;
        out.r_b = std::min(i_b, i_ab - i_a);
    }
    else if (alpha < 0.5)
    {
        out.r_b = i_b;
        out.r_a = std::min(i_a, i_ab - i_b);
    }
    else
    {
        // even split of the sum-rate face, clamped into the pentagon
        double lo = std::min(i_ab - i_b, i_a); // guards the numerically inverted case
        out.r_a = std::clamp(0.5 * i_ab, lo, i_a);
        out.r_b = i_ab - out.r_a;
    }
    out.r_a = std::max(out.r_a, 0.0);
    out.r_b = std::max(out.r_b, 0.0);
    return out;
}

/// One boundary point of the decode-and-forward network-coding scheme: the
/// componentwise min of the uplink MAC outer-bound point and the downlink
/// broadcast point along the same weight.
inline RatePair dfnc_point(const ChannelSet& cs, const PowerConfig& pc, double alpha,
                           const std::optional<RelayCovariance>& relay = std::nullopt,
                           bool* converged = nullptr)
{
    validate(pc);
    MacSolution up = optimize_mac_wsr(cs.h_ar, cs.h_br, pc.p_t, alpha);
    RelayCovariance down =
        relay ? *relay : optimize_relay_covariance(cs.h_ra, cs.h_rb, pc.p_r, alpha);
    if (converged != nullptr)
        *converged = up.converged && down.converged;
    RatePair uplink{up.r_a, up.r_b};
    RatePair downlink{mimo_rate(cs.h_rb, down.q_r), mimo_rate(cs.h_ra, down.q_r)};
    return uplink.min_with(downlink);
}

inline RateRegion dfnc_region(const ChannelSet& cs, const PowerConfig& pc,
                              std::span<const double> alpha_grid)
{
    RateRegion region;
    region.scheme = "dfnc";
    double prev = -1.0;
    for (double alpha : alpha_grid)
    {
        if (alpha <= prev || alpha < 0.0 || alpha > 1.0)
            throw std::invalid_argument("dfnc_region: alpha grid must be increasing in [0,1]");
        prev = alpha;
        region.points.emplace_back(alpha, dfnc_point(cs, pc, alpha));
    }
    return region;
}

/// Channel-inverse baseline: K = I, amplitudes tuned by the same sweep and
/// refinement machinery as the rotated scheme.
inline WsrSolution naive_eda_solution(const ChannelSet& cs, const PowerConfig& pc, double alpha,
                                      double delta = 0.02)
{
    validate(pc);
    GammaSweepOptions opts;
    opts.delta = delta;
    opts.rotate = false;
    WsrSolution sweep = wsr_gamma_sweep(cs.h_ar, cs.h_br, pc.p_t, alpha, opts);
    return wsr_alternating_refinement(cs.h_ar, cs.h_br, pc.p_t, alpha, sweep);
}

} // namespace edapnc

#endif

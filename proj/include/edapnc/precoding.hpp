#ifndef EDAPNC_PRECODING_HPP
#define EDAPNC_PRECODING_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "edapnc/capacity.hpp"
#include "edapnc/channel.hpp"
#include "edapnc/linalg.hpp"

namespace edapnc {

/// One EDA precoder configuration: the rotation K and the per-stream
/// amplitude diagonals of both users. `gamma` records the amplitude ratio
/// that produced the configuration, when one did.
struct PrecoderConfig
{
    Eigen::MatrixXd rotation;           // n_r×n_r invertible, unit-row-norm inverse
    Eigen::VectorXd amp_a;              // diag(Psi_A), nonnegative
    Eigen::VectorXd amp_b;              // diag(Psi_B), nonnegative
    std::optional<double> gamma = std::nullopt;
};

struct PrecoderMatrices
{
    Eigen::MatrixXd f_a; // n_t×n_r
    Eigen::MatrixXd f_b;
};

/// True iff k is invertible and every row of k⁻¹ has unit norm, so that the
/// rotated per-stream noise keeps unit power. Returns false on singular k.
inline bool validate_rotation(const Eigen::MatrixXd& k, double tol = 1e-9)
{
    if (k.rows() != k.cols() || k.rows() == 0)
        return false;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    if (!lu.isInvertible())
        return false;
    Eigen::MatrixXd kinv = lu.inverse();
    for (Eigen::Index r = 0; r < kinv.rows(); ++r)
        if (std::abs(kinv.row(r).squaredNorm() - 1.0) > tol)
            return false;
    return true;
}

/// Channel-inverse precoder F = Hᵀ(HHᵀ)⁻¹·diag(amp); satisfies H·F = diag(amp).
inline Eigen::MatrixXd naive_precoder(const Eigen::MatrixXd& h, const Eigen::VectorXd& amp)
{
    if (amp.size() != h.rows())
        throw std::invalid_argument("naive_precoder: amplitude vector length mismatch");
    if (amp.minCoeff() < 0.0)
        throw std::domain_error("naive_precoder: amplitudes must be nonnegative");
    return right_pseudo_inverse(h) * amp.asDiagonal();
}

/// Rotated precoder F = Hᵀ(HHᵀ)⁻¹·K·diag(amp); satisfies K⁻¹·H·F = diag(amp),
/// i.e. the streams align after the receive-side rotation K⁻¹.
inline Eigen::MatrixXd eda_precoder(const Eigen::MatrixXd& h, const Eigen::MatrixXd& k,
                                    const Eigen::VectorXd& amp)
{
    if (k.rows() != h.rows() || k.cols() != h.rows())
        throw std::invalid_argument("eda_precoder: rotation dimension mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    if (!lu.isInvertible())
        throw std::invalid_argument("eda_precoder: rotation matrix is singular");
    if (!validate_rotation(k))
        throw std::invalid_argument("eda_precoder: rotation violates the unit-noise constraint");
    if (amp.size() != h.rows())
        throw std::invalid_argument("eda_precoder: amplitude vector length mismatch");
    if (amp.size() > 0 && amp.minCoeff() < 0.0)
        throw std::domain_error("eda_precoder: amplitudes must be nonnegative");
    return right_pseudo_inverse(h) * k * amp.asDiagonal();
}

inline PrecoderMatrices build_precoders(const Eigen::MatrixXd& h_ar, const Eigen::MatrixXd& h_br,
                                        const PrecoderConfig& cfg)
{
    return {eda_precoder(h_ar, cfg.rotation, cfg.amp_a),
            eda_precoder(h_br, cfg.rotation, cfg.amp_b)};
}

/// Per-stream PNC uplink rates. Each stream i contributes
/// ½·[log2(amp_m(i)²/(amp_a(i)²+amp_b(i)²) + amp_m(i)²)]⁺ to user m; a stream
/// that is off for both users (0/0) contributes nothing.
inline RatePair uplink_rates(const Eigen::VectorXd& amp_a, const Eigen::VectorXd& amp_b)
{
    if (amp_a.size() != amp_b.size())
        throw std::invalid_argument("uplink_rates: amplitude vectors differ in length");
    if (amp_a.size() > 0 && (amp_a.minCoeff() < 0.0 || amp_b.minCoeff() < 0.0))
        throw std::domain_error("uplink_rates: amplitudes must be nonnegative");
    RatePair out;
    for (Eigen::Index i = 0; i < amp_a.size(); ++i)
    {
        double pa = amp_a(i) * amp_a(i);
        double pb = amp_b(i) * amp_b(i);
        double denom = pa + pb;
        if (denom <= 0.0)
            continue; // stream is off
        out.r_a += std::max(0.5 * std::log2(pa / denom + pa), 0.0);
        out.r_b += std::max(0.5 * std::log2(pb / denom + pb), 0.0);
    }
    return out;
}

/// Downlink caps; note the crossover: user A's cap is carried by the
/// relay-to-B channel and vice versa.
inline RatePair downlink_rates(const Eigen::MatrixXd& h_ra, const Eigen::MatrixXd& h_rb,
                               const Eigen::MatrixXd& q_r)
{
    return {mimo_rate(h_rb, q_r), mimo_rate(h_ra, q_r)};
}

/// Total uplink transmit power
/// Tr((H_a H_aᵀ)⁻¹ K Psi_A² Kᵀ) + Tr((H_b H_bᵀ)⁻¹ K Psi_B² Kᵀ),
/// identical to Tr(F_A F_Aᵀ + F_B F_Bᵀ) of the built precoders.
inline double transmit_power(const Eigen::MatrixXd& h_ar, const Eigen::MatrixXd& h_br,
                             const PrecoderConfig& cfg)
{
    Eigen::VectorXd price_a = column_quadratic_forms(gram_inverse(h_ar), cfg.rotation);
    Eigen::VectorXd price_b = column_quadratic_forms(gram_inverse(h_br), cfg.rotation);
    return price_a.dot(cfg.amp_a.cwiseAbs2()) + price_b.dot(cfg.amp_b.cwiseAbs2());
}

/// Achievable rate pair of a feasible precoder configuration and relay
/// covariance: the componentwise min of the PNC uplink rates and the
/// downlink caps. Budget violations raise an error.
inline RatePair achievable_rate_pair(const ChannelSet& cs, const PowerConfig& pc,
                                     const PrecoderConfig& cfg, const Eigen::MatrixXd& q_r)
{
    validate(pc);
    double used = transmit_power(cs.h_ar, cs.h_br, cfg);
    if (used > pc.p_t * (1.0 + 1e-6))
        throw std::invalid_argument("achievable_rate_pair: uplink power budget exceeded");
    if (q_r.trace() > pc.p_r * (1.0 + 1e-6))
        throw std::invalid_argument("achievable_rate_pair: relay power budget exceeded");
    return uplink_rates(cfg.amp_a, cfg.amp_b).min_with(downlink_rates(cs.h_ra, cs.h_rb, q_r));
}

} // namespace edapnc

#endif

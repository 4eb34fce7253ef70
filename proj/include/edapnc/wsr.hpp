#ifndef EDAPNC_WSR_HPP
#define EDAPNC_WSR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "edapnc/linalg.hpp"
#include "edapnc/precoding.hpp"

namespace edapnc {

/// Eigendecomposition of the combined power-cost matrix
/// G(gamma) = (H_a H_aᵀ)⁻¹ + gamma²·(H_b H_bᵀ)⁻¹, eigenvalues ascending.
struct GammaDecomposition
{
    double gamma = 1.0;
    Eigen::MatrixXd basis;       // orthogonal, deterministic sign convention
    Eigen::VectorXd eigenvalues; // ascending power costs
};

enum class WsrMethod
{
    kExhaustive,
    kAs1,
    kAs2,
    kNaive
};

struct WsrSolution
{
    PrecoderConfig cfg;
    double wsr = 0.0;
    double r_a_ul = 0.0;
    double r_b_ul = 0.0;
    WsrMethod method = WsrMethod::kAs1;
    bool flagged = false; // set when no positive-power candidate existed
};

namespace detail {

// Inverse gram via the channel's SVD: U·diag(1/s²)·Uᵀ. This is the canonical
// route for the power-cost matrix so that sweep and one-shot calls agree bit
// for bit.
inline Eigen::MatrixXd inverse_gram_svd(const Eigen::MatrixXd& h)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(s.size() - 1) / s(0) < 1e-10)
        throw std::invalid_argument("inverse_gram_svd: channel matrix is rank deficient");
    Eigen::VectorXd inv_sq = s.array().square().inverse();
    return svd.matrixU() * inv_sq.asDiagonal() * svd.matrixU().transpose();
}

inline GammaDecomposition decompose_power_cost(const Eigen::MatrixXd& cost_a,
                                               const Eigen::MatrixXd& cost_b, double gamma)
{
    GammaDecomposition gd;
    gd.gamma = gamma;
    SymEig eig = sym_eig_ascending(cost_a + gamma * gamma * cost_b);
    gd.basis = std::move(eig.vectors);
    gd.eigenvalues = std::move(eig.values);
    return gd;
}

} // namespace detail

/// Builds G(gamma) from the two uplink channels and eigendecomposes it.
inline GammaDecomposition gamma_decomposition(const Eigen::MatrixXd& h_ar,
                                              const Eigen::MatrixXd& h_br, double gamma)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("gamma_decomposition: gamma must be > 0");
    return detail::decompose_power_cost(detail::inverse_gram_svd(h_ar),
                                        detail::inverse_gram_svd(h_br), gamma);
}

/// The most power-efficient unitary rotation for proportional amplitude
/// matrices: the eigenbasis of G(gamma). Independent of the amplitude profile.
inline Eigen::MatrixXd optimal_unitary_rotation(const GammaDecomposition& gd)
{
    return gd.basis;
}

struct WaterfillResult
{
    Eigen::VectorXd sigma; // per-stream amplitudes (not squared)
    double lambda = 0.0;   // multiplier of the power constraint
    bool all_zero = false; // no stream had positive weight
};

/// Water-filling of the proportional-amplitude profile: stream i receives
/// sigma_i² = [w_i/(2·lambda·cost_i) - 1/(1+gamma²)]⁺, with w_i = 1 on
/// S_a∩S_b, alpha on S_a only, 1-alpha on S_b only and 0 elsewhere; lambda is
/// chosen so that Σ cost_i·sigma_i² equals p_t.
inline WaterfillResult waterfill_amplitudes(const Eigen::VectorXd& cost, double gamma,
                                            double alpha, double p_t,
                                            const std::vector<int>& s_a,
                                            const std::vector<int>& s_b)
{
    if (!(p_t > 0.0))
        throw std::invalid_argument("waterfill_amplitudes: p_t must be > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("waterfill_amplitudes: alpha must be in [0,1]");
    const Eigen::Index n = cost.size();
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(n);
    for (int i : s_a)
    {
        if (i < 0 || i >= n)
            throw std::invalid_argument("waterfill_amplitudes: S_a index out of range");
        weight(i) += alpha;
    }
    for (int i : s_b)
    {
        if (i < 0 || i >= n)
            throw std::invalid_argument("waterfill_amplitudes: S_b index out of range");
        weight(i) += 1.0 - alpha;
    }

    WaterfillResult out;
    out.sigma = Eigen::VectorXd::Zero(n);
    if (weight.maxCoeff() <= 0.0)
    {
        out.all_zero = true;
        out.lambda = 0.0;
        return out;
    }

    const double floor_term = 1.0 / (1.0 + gamma * gamma);
    // level = 1/(2 lambda); budget is strictly increasing in it
    const auto budget_at = [&](double level) {
        double t = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (weight(i) > 0.0)
                t += std::max(weight(i) * level - cost(i) * floor_term, 0.0);
        return t;
    };
    double hi = 1.0;
    while (budget_at(hi) < p_t)
        hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it)
    {
        double mid = 0.5 * (lo + hi);
        (budget_at(mid) < p_t ? lo : hi) = mid;
    }
    double level = 0.5 * (lo + hi);
    for (Eigen::Index i = 0; i < n; ++i)
        if (weight(i) > 0.0)
            out.sigma(i) =
                std::sqrt(std::max(weight(i) * level / cost(i) - floor_term, 0.0));
    out.lambda = 0.5 / level;
    return out;
}

struct GammaSweepOptions
{
    double delta = 0.02;         // grid step of the amplitude-ratio sweep
    bool rotate = true;          // false fixes K = I (the channel-inverse scheme)
    bool enumerate_sets = false; // full (S_a, S_b) enumeration, n_r <= 3 only
};

namespace detail {

inline std::vector<double> gamma_grid(double delta)
{
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("gamma sweep: delta must be in (0,1]");
    std::vector<double> grid;
    const int steps = static_cast<int>(std::llround(1.0 / delta));
    for (int k = 1; k <= steps; ++k)
        grid.push_back(static_cast<double>(k) * delta);
    for (int k = 1; k < steps; ++k)
    {
        double inv = 1.0 - static_cast<double>(k) * delta;
        if (inv > 1e-12)
            grid.push_back(1.0 / inv);
    }
    return grid; // ascending; endpoints gamma in {0, inf} stay excluded
}

inline std::vector<std::vector<int>> all_subsets(int n)
{
    std::vector<std::vector<int>> subsets;
    for (int mask = 0; mask < (1 << n); ++mask)
    {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i))
                s.push_back(i);
        subsets.push_back(std::move(s));
    }
    return subsets;
}

} // namespace detail

/// Sweeps the amplitude ratio gamma over a symmetric grid, pairing each value
/// with its most power-efficient rotation (or K = I when `rotate` is off) and
/// water-filled amplitudes, and keeps the best weighted sum rate. Ties go to
/// the smallest gamma.
inline WsrSolution wsr_gamma_sweep(const Eigen::MatrixXd& h_ar, const Eigen::MatrixXd& h_br,
                                   double p_t, double alpha,
                                   const GammaSweepOptions& opts = {})
{
    if (!(p_t > 0.0))
        throw std::invalid_argument("wsr_gamma_sweep: p_t must be > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("wsr_gamma_sweep: alpha must be in [0,1]");
    const int n = static_cast<int>(h_ar.rows());
    if (opts.enumerate_sets && n > 3)
        throw std::invalid_argument("wsr_gamma_sweep: set enumeration supported for n_r <= 3 only");

    const Eigen::MatrixXd cost_a = detail::inverse_gram_svd(h_ar);
    const Eigen::MatrixXd cost_b = detail::inverse_gram_svd(h_br);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);

    std::vector<int> full(n);
    for (int i = 0; i < n; ++i)
        full[i] = i;
    std::vector<std::vector<int>> subsets;
    if (opts.enumerate_sets)
        subsets = detail::all_subsets(n);

    WsrSolution best;
    best.method = opts.rotate ? WsrMethod::kAs1 : WsrMethod::kNaive;
    best.wsr = -1.0;
    best.flagged = true;

    for (double gamma : detail::gamma_grid(opts.delta))
    {
        GammaDecomposition gd = detail::decompose_power_cost(cost_a, cost_b, gamma);
        const Eigen::MatrixXd& rotation = opts.rotate ? gd.basis : identity;
        // Per-stream power prices under this rotation: eigenvalues for the
        // eigenbasis, plain diagonal of G for the identity rotation.
        Eigen::VectorXd price =
            opts.rotate ? gd.eigenvalues
                        : Eigen::VectorXd((cost_a + gamma * gamma * cost_b).diagonal());

        const auto consider = [&](const std::vector<int>& s_a, const std::vector<int>& s_b) {
            WaterfillResult wf = waterfill_amplitudes(price, gamma, alpha, p_t, s_a, s_b);
            if (wf.all_zero)
                return;
            RatePair r = uplink_rates(wf.sigma, gamma * wf.sigma);
            double wsr = alpha * r.r_a + (1.0 - alpha) * r.r_b;
            if (wsr > best.wsr)
            {
                best.cfg.rotation = rotation;
                best.cfg.amp_a = wf.sigma;
                best.cfg.amp_b = gamma * wf.sigma;
                best.cfg.gamma = gamma;
                best.wsr = wsr;
                best.r_a_ul = r.r_a;
                best.r_b_ul = r.r_b;
                best.flagged = false;
            }
        };

        if (opts.enumerate_sets)
        {
            for (const auto& s_a : subsets)
                for (const auto& s_b : subsets)
                    consider(s_a, s_b);
        }
        else
        {
            consider(full, full);
        }
    }
    if (best.wsr < 0.0)
        best.wsr = 0.0;
    return best;
}

/// Fixed-rotation refinement of a sweep solution: alternates between a
/// per-stream water-filling in the squared amplitudes (with the rate ratio
/// matrix held constant to make the problem concave) and re-deriving the
/// ratios from the new amplitudes. Never returns a solution worse than the
/// seed.
inline WsrSolution wsr_alternating_refinement(const Eigen::MatrixXd& h_ar,
                                              const Eigen::MatrixXd& h_br, double p_t,
                                              double alpha, const WsrSolution& seed,
                                              int max_rounds = 100, double improve_tol = 1e-6)
{
    if (!(p_t > 0.0))
        throw std::invalid_argument("wsr_alternating_refinement: p_t must be > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("wsr_alternating_refinement: alpha must be in [0,1]");
    const Eigen::MatrixXd& rotation = seed.cfg.rotation;
    const Eigen::Index n = rotation.rows();

    const Eigen::VectorXd price_a = column_quadratic_forms(gram_inverse(h_ar), rotation);
    const Eigen::VectorXd price_b = column_quadratic_forms(gram_inverse(h_br), rotation);

    Eigen::VectorXd theta(n); // per-stream share of user A in the rate fraction
    for (Eigen::Index i = 0; i < n; ++i)
    {
        double pa = seed.cfg.amp_a(i) * seed.cfg.amp_a(i);
        double pb = seed.cfg.amp_b(i) * seed.cfg.amp_b(i);
        theta(i) = (pa + pb) > 0.0 ? pa / (pa + pb) : 0.5;
    }

    WsrSolution best = seed;
    best.method = seed.method == WsrMethod::kNaive ? WsrMethod::kNaive : WsrMethod::kAs2;

    double prev_wsr = -1.0;
    for (int round = 0; round < max_rounds; ++round)
    {
        // Water-fill the squared amplitudes for fixed theta.
        const auto budget_at = [&](double level) {
            double t = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                t += std::max(alpha * level - price_a(i) * theta(i), 0.0);
                t += std::max((1.0 - alpha) * level - price_b(i) * (1.0 - theta(i)), 0.0);
            }
            return t;
        };
        double hi = 1.0;
        while (budget_at(hi) < p_t)
            hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it)
        {
            double mid = 0.5 * (lo + hi);
            (budget_at(mid) < p_t ? lo : hi) = mid;
        }
        double level = 0.5 * (lo + hi);

        Eigen::VectorXd amp_a(n), amp_b(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            double pa = std::max(alpha * level / price_a(i) - theta(i), 0.0);
            double pb = std::max((1.0 - alpha) * level / price_b(i) - (1.0 - theta(i)), 0.0);
            amp_a(i) = std::sqrt(pa);
            amp_b(i) = std::sqrt(pb);
        }

        RatePair r = uplink_rates(amp_a, amp_b);
        double wsr = alpha * r.r_a + (1.0 - alpha) * r.r_b;
        if (wsr > best.wsr)
        {
            best.cfg.rotation = rotation;
            best.cfg.amp_a = amp_a;
            best.cfg.amp_b = amp_b;
            best.cfg.gamma = seed.cfg.gamma;
            best.wsr = wsr;
            best.r_a_ul = r.r_a;
            best.r_b_ul = r.r_b;
            best.flagged = false;
        }
        if (wsr <= prev_wsr + improve_tol)
            break;
        prev_wsr = wsr;

        for (Eigen::Index i = 0; i < n; ++i)
        {
            double pa = amp_a(i) * amp_a(i);
            double pb = amp_b(i) * amp_b(i);
            if (pa + pb > 0.0)
                theta(i) = pa / (pa + pb);
        }
    }
    return best;
}

struct ExhaustiveGrid
{
    int angle_steps = 64;    // per rotation angle, over [0, pi)
    int power_steps = 16;    // per power-ratio coordinate
    int refine_factor = 4;   // resolution multiplier per refinement pass
    int refine_passes = 3;   // passes re-center on the incumbent until stable
    bool unitary_only = false; // restrict to K⁻¹ = plane rotation
};

namespace detail {

struct PowerPoint
{
    double a1, a2, b1, b2;     // squared-amplitude direction (unnormalized)
    double ratio1, ratio2;     // a_i/(a_i+b_i), 0 when the stream is off
    double s, ra, rb;          // generating coordinates
    int pattern;               // stream on/off support, 4 bits
};

inline PowerPoint make_power_point(double s, double ra, double rb)
{
    PowerPoint p{};
    p.a1 = s * ra;
    p.a2 = s * (1.0 - ra);
    p.b1 = (1.0 - s) * rb;
    p.b2 = (1.0 - s) * (1.0 - rb);
    double d1 = p.a1 + p.b1;
    double d2 = p.a2 + p.b2;
    p.ratio1 = d1 > 0.0 ? p.a1 / d1 : 0.0;
    p.ratio2 = d2 > 0.0 ? p.a2 / d2 : 0.0;
    p.s = s;
    p.ra = ra;
    p.rb = rb;
    p.pattern = (p.a1 > 0.0 ? 8 : 0) | (p.a2 > 0.0 ? 4 : 0) | (p.b1 > 0.0 ? 2 : 0) |
                (p.b2 > 0.0 ? 1 : 0);
    return p;
}

// Per-stream power prices of the 2×2 rotation whose inverse has unit rows at
// the given angles. Returns false when the rotation is (near) singular.
inline bool angle_prices(double theta1, double theta2, const Eigen::Matrix2d& cost_a,
                         const Eigen::Matrix2d& cost_b, double& ca1, double& ca2, double& cb1,
                         double& cb2)
{
    double det = std::sin(theta2 - theta1);
    if (std::abs(det) < 1e-9)
        return false;
    double c1 = std::cos(theta1), s1 = std::sin(theta1);
    double c2 = std::cos(theta2), s2 = std::sin(theta2);
    // K = inv([[c1,s1],[c2,s2]]); columns scaled by 1/det
    double k00 = s2 / det, k10 = -c2 / det;  // first column
    double k01 = -s1 / det, k11 = c1 / det;  // second column
    const auto quad = [](const Eigen::Matrix2d& m, double x, double y) {
        return m(0, 0) * x * x + 2.0 * m(0, 1) * x * y + m(1, 1) * y * y;
    };
    ca1 = quad(cost_a, k00, k10);
    ca2 = quad(cost_a, k01, k11);
    cb1 = quad(cost_b, k00, k10);
    cb2 = quad(cost_b, k01, k11);
    return true;
}

// Score monotone in the weighted sum rate: alpha=1/2 uses a log-free product.
inline double exhaustive_score(double za1, double za2, double zb1, double zb2, double alpha,
                               bool half_alpha)
{
    double ma = std::max(za1, 1.0) * std::max(za2, 1.0);
    double mb = std::max(zb1, 1.0) * std::max(zb2, 1.0);
    if (half_alpha)
        return ma * mb;
    return alpha * std::log2(ma) + (1.0 - alpha) * std::log2(mb);
}

} // namespace detail

/// Grid search over the full 2×2 feasible set: rotation-inverse rows as unit
/// vectors at two angles, power split/ratio coordinates scaled onto the power
/// constraint surface, followed by local refinement around the incumbent.
inline WsrSolution wsr_exhaustive_2d(const Eigen::MatrixXd& h_ar, const Eigen::MatrixXd& h_br,
                                     double p_t, double alpha, const ExhaustiveGrid& grid = {})
{
    if (h_ar.rows() != 2)
        throw std::invalid_argument("wsr_exhaustive_2d: supported for n_r == 2 only");
    if (!(p_t > 0.0))
        throw std::invalid_argument("wsr_exhaustive_2d: p_t must be > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("wsr_exhaustive_2d: alpha must be in [0,1]");
    if (grid.angle_steps < 2 || grid.power_steps < 2 || grid.refine_factor < 1)
        throw std::invalid_argument("wsr_exhaustive_2d: degenerate grid");

    const Eigen::Matrix2d cost_a = gram_inverse(h_ar);
    const Eigen::Matrix2d cost_b = gram_inverse(h_br);
    const bool half_alpha = alpha == 0.5;
    const double pi = 3.14159265358979323846;
    const double angle_step = pi / grid.angle_steps;
    const double power_step = 1.0 / (grid.power_steps - 1);

    std::vector<detail::PowerPoint> points;
    points.reserve(static_cast<std::size_t>(grid.power_steps) * grid.power_steps *
                   grid.power_steps);
    for (int is = 0; is < grid.power_steps; ++is)
        for (int ia = 0; ia < grid.power_steps; ++ia)
            for (int ib = 0; ib < grid.power_steps; ++ib)
                points.push_back(detail::make_power_point(is * power_step, ia * power_step,
                                                          ib * power_step));

    struct Incumbent
    {
        double theta1 = 0.0, theta2 = 0.0, s = 0.5, ra = 0.5, rb = 0.5;
        double score = -1.0;
    };

    // The landscape splits into modes by which streams carry power (one user
    // silent, single-stream allocations, ...). The coarse scan keeps the best
    // point of every stream-support pattern and each is refined
    // independently, so a broad ridge of one mode cannot crowd out the rest.
    std::array<Incumbent, 16> best_by_pattern;

    for (int i1 = 0; i1 < grid.angle_steps; ++i1)
    {
        double theta1 = i1 * angle_step;
        const int j_hi = grid.unitary_only ? 1 : grid.angle_steps;
        for (int j = 0; j < j_hi; ++j)
        {
            double theta2 = grid.unitary_only ? theta1 + 0.5 * pi : j * angle_step;
            double ca1, ca2, cb1, cb2;
            if (!detail::angle_prices(theta1, theta2, cost_a, cost_b, ca1, ca2, cb1, cb2))
                continue;
            for (const auto& p : points)
            {
                double raw = ca1 * p.a1 + ca2 * p.a2 + cb1 * p.b1 + cb2 * p.b2;
                if (!(raw > 0.0))
                    continue;
                double scale = p_t / raw;
                double za1 = p.ratio1 + scale * p.a1;
                double za2 = p.ratio2 + scale * p.a2;
                double zb1 = (1.0 - p.ratio1) + scale * p.b1;
                double zb2 = (1.0 - p.ratio2) + scale * p.b2;
                double score = detail::exhaustive_score(za1, za2, zb1, zb2, alpha, half_alpha);
                Incumbent& slot = best_by_pattern[p.pattern];
                if (score > slot.score)
                    slot = {theta1, theta2, p.s, p.ra, p.rb, score};
            }
        }
    }

    // refine the strongest few patterns
    std::vector<Incumbent> candidates(best_by_pattern.begin(), best_by_pattern.end());
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Incumbent& a, const Incumbent& b) { return a.score > b.score; });
    while (candidates.size() > 6 || (!candidates.empty() && candidates.back().score < 0.0))
        candidates.pop_back();
    if (candidates.empty())
        throw std::runtime_error("wsr_exhaustive_2d: no feasible grid point");

    // Refine every candidate: each pass shrinks the step by refine_factor and
    // hill-climbs (re-centers the search box on improvements) until stable.
    const auto refine = [&](Incumbent inc) {
        double a_step = angle_step;
        double p_step = power_step;
        for (int pass = 0; pass < grid.refine_passes; ++pass)
        {
            const double fine_a = a_step / grid.refine_factor;
            const double fine_p = p_step / grid.refine_factor;
            for (int climb = 0; climb < 64; ++climb)
            {
                Incumbent base = inc;
                for (int d1 = -grid.refine_factor; d1 <= grid.refine_factor; ++d1)
                    for (int d2 = -grid.refine_factor; d2 <= grid.refine_factor; ++d2)
                    {
                        if (grid.unitary_only && d2 != 0)
                            continue; // theta2 is slaved to theta1 in unitary mode
                        double t1 = base.theta1 + d1 * fine_a;
                        double t2 =
                            grid.unitary_only ? t1 + 0.5 * pi : base.theta2 + d2 * fine_a;
                        double ca1, ca2, cb1, cb2;
                        if (!detail::angle_prices(t1, t2, cost_a, cost_b, ca1, ca2, cb1,
                                                  cb2))
                            continue;
                        for (int ds = -grid.refine_factor; ds <= grid.refine_factor; ++ds)
                            for (int da = -grid.refine_factor; da <= grid.refine_factor;
                                 ++da)
                                for (int db = -grid.refine_factor;
                                     db <= grid.refine_factor; ++db)
                                {
                                    double s = std::clamp(base.s + ds * fine_p, 0.0, 1.0);
                                    double ra =
                                        std::clamp(base.ra + da * fine_p, 0.0, 1.0);
                                    double rb =
                                        std::clamp(base.rb + db * fine_p, 0.0, 1.0);
                                    detail::PowerPoint p =
                                        detail::make_power_point(s, ra, rb);
                                    double raw = ca1 * p.a1 + ca2 * p.a2 + cb1 * p.b1 +
                                                 cb2 * p.b2;
                                    if (!(raw > 0.0))
                                        continue;
                                    double scale = p_t / raw;
                                    double score = detail::exhaustive_score(
                                        p.ratio1 + scale * p.a1, p.ratio2 + scale * p.a2,
                                        (1.0 - p.ratio1) + scale * p.b1,
                                        (1.0 - p.ratio2) + scale * p.b2, alpha,
                                        half_alpha);
                                    if (score > inc.score)
                                        inc = {t1, t2, s, ra, rb, score};
                                }
                    }
                if (inc.score <= base.score)
                    break; // stable at this resolution
            }
            a_step = fine_a;
            p_step = fine_p;
        }
        return inc;
    };

    Incumbent inc;
    for (const Incumbent& cand : candidates)
    {
        Incumbent polished = refine(cand);
        if (polished.score > inc.score)
            inc = polished;
    }

    // Materialize the incumbent as a precoder configuration.
    WsrSolution out;
    out.method = WsrMethod::kExhaustive;
    double ca1, ca2, cb1, cb2;
    if (!detail::angle_prices(inc.theta1, inc.theta2, cost_a, cost_b, ca1, ca2, cb1, cb2))
        throw std::runtime_error("wsr_exhaustive_2d: incumbent rotation became singular");
    detail::PowerPoint p = detail::make_power_point(inc.s, inc.ra, inc.rb);
    double raw = ca1 * p.a1 + ca2 * p.a2 + cb1 * p.b1 + cb2 * p.b2;
    double scale = p_t / raw;

    Eigen::Matrix2d kinv;
    kinv << std::cos(inc.theta1), std::sin(inc.theta1), std::cos(inc.theta2),
        std::sin(inc.theta2);
    out.cfg.rotation = kinv.inverse();
    out.cfg.amp_a = Eigen::Vector2d(std::sqrt(scale * p.a1), std::sqrt(scale * p.a2));
    out.cfg.amp_b = Eigen::Vector2d(std::sqrt(scale * p.b1), std::sqrt(scale * p.b2));
    RatePair r = uplink_rates(out.cfg.amp_a, out.cfg.amp_b);
    out.r_a_ul = r.r_a;
    out.r_b_ul = r.r_b;
    out.wsr = alpha * r.r_a + (1.0 - alpha) * r.r_b;
    return out;
}

} // namespace edapnc

#endif

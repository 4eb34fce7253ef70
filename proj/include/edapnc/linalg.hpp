#ifndef EDAPNC_LINALG_HPP
#define EDAPNC_LINALG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <stdexcept>

namespace edapnc {

inline constexpr double kLog2E = 1.4426950408889634074; // 1/ln(2)

// ½·log2 det(I + M) for symmetric PSD M, via Cholesky of I + M.
inline double half_log2_det_identity_plus(const Eigen::MatrixXd& m)
{
    Eigen::MatrixXd a = m;
    a.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("half_log2_det_identity_plus: matrix I+M is not positive definite");
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        log_det += std::log(llt.matrixLLT()(i, i));
    return log_det * kLog2E; // 2·Σlog(L_ii) halved
}

// Symmetric PSD test with a relative eigenvalue floor.
inline bool is_psd(const Eigen::MatrixXd& q, double tol = 1e-9)
{
    if (q.rows() != q.cols())
        return false;
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, q.cwiseAbs().maxCoeff()))
        return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
    double lo = eig.eigenvalues().minCoeff();
    double hi = eig.eigenvalues().maxCoeff();
    return lo >= -tol * std::max(1.0, hi);
}

struct SymEig
{
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns, sign-normalized
};

// Eigendecomposition of a symmetric matrix with a deterministic sign
// convention: the largest-magnitude component of each eigenvector is made
// positive (ties resolved toward the lowest row index).
inline SymEig sym_eig_ascending(const Eigen::MatrixXd& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("sym_eig_ascending: eigendecomposition failed");
    SymEig out{eig.eigenvalues(), eig.eigenvectors()};
    for (Eigen::Index c = 0; c < out.vectors.cols(); ++c)
    {
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < out.vectors.rows(); ++r)
        {
            double mag = std::abs(out.vectors(r, c));
            if (mag > best + 1e-14)
            {
                best = mag;
                pivot = r;
            }
        }
        if (out.vectors(pivot, c) < 0.0)
            out.vectors.col(c) = -out.vectors.col(c);
    }
    return out;
}

// (H Hᵀ)⁻¹ for a full-row-rank H; the rank test uses σ_min/σ_max < 1e-10.
inline Eigen::MatrixXd gram_inverse(const Eigen::MatrixXd& h)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(s.size() - 1) < 1e-10 * s(0) || s(0) == 0.0)
        throw std::invalid_argument("gram_inverse: matrix is rank deficient");
    Eigen::MatrixXd gram = h * h.transpose();
    return gram.llt().solve(Eigen::MatrixXd::Identity(h.rows(), h.rows()));
}

// Right pseudo-inverse Hᵀ(H Hᵀ)⁻¹ of a full-row-rank H, computed through the
// SVD so the error grows with cond(H) instead of cond(H)².
inline Eigen::MatrixXd right_pseudo_inverse(const Eigen::MatrixXd& h)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0 || s(s.size() - 1) / s(0) < 1e-10)
        throw std::invalid_argument("right_pseudo_inverse: matrix is rank deficient");
    return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

// Per-column quadratic forms kᵢᵀ C kᵢ; these are the per-stream transmit-power
// prices of a rotation K under the inverse-gram cost C.
inline Eigen::VectorXd column_quadratic_forms(const Eigen::MatrixXd& c, const Eigen::MatrixXd& k)
{
    Eigen::VectorXd out(k.cols());
    for (Eigen::Index i = 0; i < k.cols(); ++i)
        out(i) = k.col(i).dot(c * k.col(i));
    return out;
}

// Pairwise (cascade) summation; order-stable and independent of chunking.
inline double pairwise_sum(std::span<const double> xs)
{
    if (xs.empty())
        return 0.0;
    if (xs.size() <= 8)
    {
        double s = 0.0;
        for (double x : xs)
            s += x;
        return s;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

} // namespace edapnc

#endif

#ifndef EDAPNC_CHANNEL_HPP
#define EDAPNC_CHANNEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

#include "edapnc/rng.hpp"

namespace edapnc {

enum class FieldTag
{
    kReal,
    kComplex
};

struct RatePair
{
    double r_a = 0.0; // bits per channel use
    double r_b = 0.0;

    double sum() const { return r_a + r_b; }
    RatePair min_with(const RatePair& o) const
    {
        return {std::min(r_a, o.r_a), std::min(r_b, o.r_b)};
    }
};

/// Linear-domain power budget and noise variances of one scenario.
/// Defaults follow the unit-noise simplification sigma_R² = sigma_A² = sigma_B² = 1.
struct PowerConfig
{
    double p_t = 2.0; // total two-user uplink power
    double p_r = 1.0; // relay power
    double sigma_r2 = 1.0;
    double sigma_a2 = 1.0;
    double sigma_b2 = 1.0;
};

inline void validate(const PowerConfig& pc)
{
    if (!(pc.p_t > 0.0) || !(pc.p_r > 0.0) || !(pc.sigma_r2 > 0.0) || !(pc.sigma_a2 > 0.0) ||
        !(pc.sigma_b2 > 0.0))
        throw std::invalid_argument("PowerConfig: all powers and noise variances must be > 0");
}

/// Average per-user uplink SNR (dB) to total uplink power: P_T = 2·sigma_R²·10^(dB/10).
inline double snr_to_power(double snr_db, double sigma_r2 = 1.0)
{
    if (!(sigma_r2 > 0.0))
        throw std::invalid_argument("snr_to_power: sigma_r2 must be > 0");
    return 2.0 * sigma_r2 * std::pow(10.0, snr_db / 10.0);
}

/// Relay SNR (dB) to relay power: P_R = sigma_R²·10^(dB/10). The simulators
/// default to SNR_R = SNR, i.e. they pass the same dB value to both helpers.
inline double snr_to_relay_power(double snr_db, double sigma_r2 = 1.0)
{
    if (!(sigma_r2 > 0.0))
        throw std::invalid_argument("snr_to_relay_power: sigma_r2 must be > 0");
    return sigma_r2 * std::pow(10.0, snr_db / 10.0);
}

/// One real-valued channel realization of the two-way relay network.
/// Uplink matrices are n_r×n_t, downlink matrices n_t×n_r, and n_t ≥ n_r.
struct ChannelSet
{
    Eigen::MatrixXd h_ar; // user A -> relay
    Eigen::MatrixXd h_br; // user B -> relay
    Eigen::MatrixXd h_ra; // relay -> user A
    Eigen::MatrixXd h_rb; // relay -> user B
    int n_t = 0;
    int n_r = 0;
    FieldTag origin = FieldTag::kReal; // kComplex when built by complex_to_real
    int redraws = 0;                   // rank-deficiency redraw count at generation
};

/// Complex-valued counterpart; expand with complex_to_real before computing rates.
struct ComplexChannelSet
{
    Eigen::MatrixXcd h_ar;
    Eigen::MatrixXcd h_br;
    Eigen::MatrixXcd h_ra;
    Eigen::MatrixXcd h_rb;
    int n_t = 0;
    int n_r = 0;
    int redraws = 0;
};

namespace detail {

inline void check_dims(int n_t, int n_r)
{
    if (n_r < 1 || n_t < n_r)
        throw std::invalid_argument("channel dimensions must satisfy n_t >= n_r >= 1");
}

template <typename Mat>
bool full_row_rank(const Mat& h)
{
    Eigen::JacobiSVD<Mat> svd(h);
    const auto& s = svd.singularValues();
    return s(0) > 0.0 && s(s.size() - 1) / s(0) >= 1e-10;
}

inline Eigen::MatrixXd random_gaussian(int rows, int cols, GaussianSampler& g)
{
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) // row-major fill, matches the file format
        for (int c = 0; c < cols; ++c)
            m(r, c) = g.normal();
    return m;
}

inline Eigen::MatrixXcd random_circular_gaussian(int rows, int cols, GaussianSampler& g)
{
    const double scale = std::sqrt(0.5); // unit-variance complex entries
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
        {
            double re = g.normal() * scale;
            double im = g.normal() * scale;
            m(r, c) = std::complex<double>(re, im);
        }
    return m;
}

} // namespace detail

/// Draws one real channel realization with i.i.d. N(0,1) entries. Uplink
/// matrices are redrawn on the measure-zero rank-deficiency event (counted in
/// `redraws`). With `reciprocal`, downlink matrices are the transposes of the
/// uplink ones instead of independent draws.
inline ChannelSet generate_real_channel(int n_t, int n_r, bool reciprocal, std::uint64_t seed)
{
    detail::check_dims(n_t, n_r);
    GaussianSampler g(seed);
    ChannelSet cs;
    cs.n_t = n_t;
    cs.n_r = n_r;
    cs.origin = FieldTag::kReal;
    do
    {
        cs.h_ar = detail::random_gaussian(n_r, n_t, g);
        cs.h_br = detail::random_gaussian(n_r, n_t, g);
        if (detail::full_row_rank(cs.h_ar) && detail::full_row_rank(cs.h_br))
            break;
        ++cs.redraws;
    } while (true);
    if (reciprocal)
    {
        cs.h_ra = cs.h_ar.transpose();
        cs.h_rb = cs.h_br.transpose();
    }
    else
    {
        cs.h_ra = detail::random_gaussian(n_t, n_r, g);
        cs.h_rb = detail::random_gaussian(n_t, n_r, g);
    }
    return cs;
}

/// Complex variant with i.i.d. CN(0,1) entries.
inline ComplexChannelSet generate_complex_channel(int n_t, int n_r, bool reciprocal,
                                                  std::uint64_t seed)
{
    detail::check_dims(n_t, n_r);
    GaussianSampler g(seed);
    ComplexChannelSet cs;
    cs.n_t = n_t;
    cs.n_r = n_r;
    do
    {
        cs.h_ar = detail::random_circular_gaussian(n_r, n_t, g);
        cs.h_br = detail::random_circular_gaussian(n_r, n_t, g);
        if (detail::full_row_rank(cs.h_ar) && detail::full_row_rank(cs.h_br))
            break;
        ++cs.redraws;
    } while (true);
    if (reciprocal)
    {
        cs.h_ra = cs.h_ar.transpose();
        cs.h_rb = cs.h_br.transpose();
    }
    else
    {
        cs.h_ra = detail::random_circular_gaussian(n_t, n_r, g);
        cs.h_rb = detail::random_circular_gaussian(n_t, n_r, g);
    }
    return cs;
}

/// Real block expansion [[Re, -Im], [Im, Re]] of a complex matrix.
inline Eigen::MatrixXd expand_complex(const Eigen::MatrixXcd& h)
{
    Eigen::MatrixXd out(2 * h.rows(), 2 * h.cols());
    out.topLeftCorner(h.rows(), h.cols()) = h.real();
    out.topRightCorner(h.rows(), h.cols()) = -h.imag();
    out.bottomLeftCorner(h.rows(), h.cols()) = h.imag();
    out.bottomRightCorner(h.rows(), h.cols()) = h.real();
    return out;
}

/// Expands a complex realization into the equivalent real one; dimensions double.
inline ChannelSet complex_to_real(const ComplexChannelSet& ccs)
{
    ChannelSet cs;
    cs.n_t = 2 * ccs.n_t;
    cs.n_r = 2 * ccs.n_r;
    cs.origin = FieldTag::kComplex;
    cs.redraws = ccs.redraws;
    cs.h_ar = expand_complex(ccs.h_ar);
    cs.h_br = expand_complex(ccs.h_br);
    cs.h_ra = expand_complex(ccs.h_ra);
    cs.h_rb = expand_complex(ccs.h_rb);
    return cs;
}

// ---------- plain-text channel replay format ----------
//
//   edapnc-channel 1
//   n_t <int>
//   n_r <int>
//   field real|complex
//   h_ar
//   <row-major entries, one matrix row per line; complex entries as "re im">
//   h_br / h_ra / h_rb likewise

namespace detail {

inline void write_matrix(std::ostream& os, const Eigen::MatrixXd& m)
{
    os.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            os << (c ? " " : "") << m(r, c);
        os << "\n";
    }
}

inline void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m)
{
    os.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            os << (c ? " " : "") << m(r, c).real() << " " << m(r, c).imag();
        os << "\n";
    }
}

template <typename Mat>
Mat read_matrix(std::istream& is, int rows, int cols, const std::string& name)
{
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
        {
            if constexpr (std::is_same_v<Mat, Eigen::MatrixXd>)
            {
                if (!(is >> m(r, c)))
                    throw std::runtime_error("channel file: truncated matrix " + name);
            }
            else
            {
                double re, im;
                if (!(is >> re >> im))
                    throw std::runtime_error("channel file: truncated matrix " + name);
                m(r, c) = std::complex<double>(re, im);
            }
        }
    return m;
}

inline void expect_token(std::istream& is, const std::string& want)
{
    std::string got;
    if (!(is >> got) || got != want)
        throw std::runtime_error("channel file: expected '" + want + "', got '" + got + "'");
}

} // namespace detail

inline void save_channel_set(std::ostream& os, const ChannelSet& cs)
{
    os << "edapnc-channel 1\n";
    os << "n_t " << cs.n_t << "\nn_r " << cs.n_r << "\nfield real\n";
    os << "h_ar\n";
    detail::write_matrix(os, cs.h_ar);
    os << "h_br\n";
    detail::write_matrix(os, cs.h_br);
    os << "h_ra\n";
    detail::write_matrix(os, cs.h_ra);
    os << "h_rb\n";
    detail::write_matrix(os, cs.h_rb);
}

inline void save_channel_set(std::ostream& os, const ComplexChannelSet& cs)
{
    os << "edapnc-channel 1\n";
    os << "n_t " << cs.n_t << "\nn_r " << cs.n_r << "\nfield complex\n";
    os << "h_ar\n";
    detail::write_matrix(os, cs.h_ar);
    os << "h_br\n";
    detail::write_matrix(os, cs.h_br);
    os << "h_ra\n";
    detail::write_matrix(os, cs.h_ra);
    os << "h_rb\n";
    detail::write_matrix(os, cs.h_rb);
}

using LoadedChannel = std::variant<ChannelSet, ComplexChannelSet>;

inline LoadedChannel load_channel_set(std::istream& is)
{
    detail::expect_token(is, "edapnc-channel");
    detail::expect_token(is, "1");
    int n_t = 0, n_r = 0;
    detail::expect_token(is, "n_t");
    if (!(is >> n_t))
        throw std::runtime_error("channel file: bad n_t");
    detail::expect_token(is, "n_r");
    if (!(is >> n_r))
        throw std::runtime_error("channel file: bad n_r");
    detail::check_dims(n_t, n_r);
    detail::expect_token(is, "field");
    std::string field;
    is >> field;
    if (field == "real")
    {
        ChannelSet cs;
        cs.n_t = n_t;
        cs.n_r = n_r;
        detail::expect_token(is, "h_ar");
        cs.h_ar = detail::read_matrix<Eigen::MatrixXd>(is, n_r, n_t, "h_ar");
        detail::expect_token(is, "h_br");
        cs.h_br = detail::read_matrix<Eigen::MatrixXd>(is, n_r, n_t, "h_br");
        detail::expect_token(is, "h_ra");
        cs.h_ra = detail::read_matrix<Eigen::MatrixXd>(is, n_t, n_r, "h_ra");
        detail::expect_token(is, "h_rb");
        cs.h_rb = detail::read_matrix<Eigen::MatrixXd>(is, n_t, n_r, "h_rb");
        if (!detail::full_row_rank(cs.h_ar) || !detail::full_row_rank(cs.h_br))
            throw std::runtime_error("channel file: uplink matrix is rank deficient");
        return cs;
    }
    if (field == "complex")
    {
        ComplexChannelSet cs;
        cs.n_t = n_t;
        cs.n_r = n_r;
        detail::expect_token(is, "h_ar");
        cs.h_ar = detail::read_matrix<Eigen::MatrixXcd>(is, n_r, n_t, "h_ar");
        detail::expect_token(is, "h_br");
        cs.h_br = detail::read_matrix<Eigen::MatrixXcd>(is, n_r, n_t, "h_br");
        detail::expect_token(is, "h_ra");
        cs.h_ra = detail::read_matrix<Eigen::MatrixXcd>(is, n_t, n_r, "h_ra");
        detail::expect_token(is, "h_rb");
        cs.h_rb = detail::read_matrix<Eigen::MatrixXcd>(is, n_t, n_r, "h_rb");
        if (!detail::full_row_rank(cs.h_ar) || !detail::full_row_rank(cs.h_br))
            throw std::runtime_error("channel file: uplink matrix is rank deficient");
        return cs;
    }
    throw std::runtime_error("channel file: unknown field tag '" + field + "'");
}

inline void save_channel_file(const std::string& path, const ChannelSet& cs)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open channel file for writing: " + path);
    save_channel_set(os, cs);
}

inline void save_channel_file(const std::string& path, const ComplexChannelSet& cs)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open channel file for writing: " + path);
    save_channel_set(os, cs);
}

inline LoadedChannel load_channel_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open channel file: " + path);
    return load_channel_set(is);
}

} // namespace edapnc

#endif

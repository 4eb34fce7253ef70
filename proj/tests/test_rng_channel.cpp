#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>

#include "edapnc/channel.hpp"
#include "edapnc/linalg.hpp"

using namespace edapnc;

// Covered tests:
// - seed determinism and sub-seed separation
// - dimension preconditions
// - entry statistics of the generated ensembles
// - complex-to-real block expansion against direct complex arithmetic
// - log-det identity between complex model and its real expansion
// - SNR-to-power conversions
// - reciprocity flag
// - channel file round trip and validation

TEST_CASE("identical seeds reproduce identical channels")
{
    ChannelSet a = generate_real_channel(3, 2, false, 12345);
    ChannelSet b = generate_real_channel(3, 2, false, 12345);
    REQUIRE(a.h_ar == b.h_ar);
    REQUIRE(a.h_br == b.h_br);
    REQUIRE(a.h_ra == b.h_ra);
    REQUIRE(a.h_rb == b.h_rb);

    ChannelSet c = generate_real_channel(3, 2, false, 12346);
    REQUIRE(a.h_ar != c.h_ar);
}

TEST_CASE("sub-seeds of distinct streams differ")
{
    std::uint64_t s0 = derive_subseed(7, 0);
    std::uint64_t s1 = derive_subseed(7, 1);
    std::uint64_t s2 = derive_subseed(8, 0);
    REQUIRE(s0 != s1);
    REQUIRE(s0 != s2);
    REQUIRE(derive_subseed(7, 0) == s0);
}

TEST_CASE("invalid dimensions are rejected")
{
    REQUIRE_THROWS_AS(generate_real_channel(1, 2, false, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_real_channel(2, 0, false, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_complex_channel(1, 2, false, 1), std::invalid_argument);
}

TEST_CASE("generated entries match the declared N(0,1) distribution")
{
    // 10^5 samples of h_ar entries across many realizations
    const int per_set = 2 * 4;
    const int sets = 100000 / per_set + 1;
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(sets) * per_set);
    for (int k = 0; k < sets; ++k)
    {
        ChannelSet cs = generate_real_channel(4, 2, false, derive_subseed(999, k));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 4; ++c)
                xs.push_back(cs.h_ar(r, c));
    }
    const double n = static_cast<double>(xs.size());
    double mean = pairwise_sum(xs) / n;
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        sq[i] = (xs[i] - mean) * (xs[i] - mean);
    double var = pairwise_sum(sq) / (n - 1.0);

    REQUIRE(std::abs(mean) < 3.0 / std::sqrt(n));             // 3 sigma of the mean
    REQUIRE(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));  // 3 sigma of the variance
}

TEST_CASE("complex entries have unit variance split across parts")
{
    std::vector<double> re, im;
    for (int k = 0; k < 2000; ++k)
    {
        ComplexChannelSet cs = generate_complex_channel(4, 2, false, derive_subseed(5, k));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 4; ++c)
            {
                re.push_back(cs.h_ar(r, c).real());
                im.push_back(cs.h_ar(r, c).imag());
            }
    }
    auto var_of = [](const std::vector<double>& xs) {
        double mean = pairwise_sum(xs) / xs.size();
        double acc = 0;
        for (double x : xs)
            acc += (x - mean) * (x - mean);
        return acc / (xs.size() - 1.0);
    };
    REQUIRE(var_of(re) == Catch::Approx(0.5).margin(0.02));
    REQUIRE(var_of(im) == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("block expansion of scalar channels")
{
    ComplexChannelSet cs;
    cs.n_t = 1;
    cs.n_r = 1;
    cs.h_ar = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(1.0, 0.0));
    cs.h_br = cs.h_ar;
    cs.h_ra = cs.h_ar;
    cs.h_rb = cs.h_ar;
    ChannelSet real = complex_to_real(cs);
    REQUIRE(real.n_t == 2);
    REQUIRE(real.n_r == 2);
    REQUIRE(real.h_ar.isApprox(Eigen::Matrix2d::Identity()));

    cs.h_ar(0, 0) = std::complex<double>(0.0, 1.0);
    Eigen::MatrixXd expanded = expand_complex(cs.h_ar);
    Eigen::Matrix2d expected;
    expected << 0, -1, 1, 0;
    REQUIRE(expanded.isApprox(expected));
}

TEST_CASE("expanded product equals stacked complex product")
{
    ComplexChannelSet cs = generate_complex_channel(2, 2, false, 42);
    GaussianSampler g(43);
    Eigen::VectorXcd x(2);
    for (int i = 0; i < 2; ++i)
        x(i) = std::complex<double>(g.normal(), g.normal());

    Eigen::VectorXcd hx = cs.h_ar * x;
    Eigen::VectorXd stacked(4);
    stacked << x.real(), x.imag();
    Eigen::VectorXd mapped = expand_complex(cs.h_ar) * stacked;
    Eigen::VectorXd expected(4);
    expected << hx.real(), hx.imag();
    REQUIRE((mapped - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("log-det identity between complex model and real expansion")
{
    for (int k = 0; k < 100; ++k)
    {
        ComplexChannelSet cs = generate_complex_channel(2, 2, false, derive_subseed(77, k));
        GaussianSampler g(derive_subseed(78, k));
        Eigen::MatrixXcd m(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                m(r, c) = std::complex<double>(g.normal(), g.normal());
        Eigen::MatrixXcd q = m * m.adjoint(); // Hermitian PSD

        Eigen::MatrixXcd inner = cs.h_ar * q * cs.h_ar.adjoint();
        inner += Eigen::MatrixXcd::Identity(2, 2);
        double complex_rate = std::log2(std::abs(inner.determinant()));

        // the real-model half-log-det equals the full complex log-det
        Eigen::MatrixXd q_real = expand_complex(q);
        double real_rate =
            half_log2_det_identity_plus(expand_complex(cs.h_ar) * q_real *
                                        expand_complex(cs.h_ar).transpose());
        REQUIRE(complex_rate == Catch::Approx(real_rate).margin(1e-9));
    }
}

TEST_CASE("snr conversions")
{
    REQUIRE(snr_to_power(0.0, 1.0) == Catch::Approx(2.0));
    REQUIRE(snr_to_power(15.0, 1.0) == Catch::Approx(2.0 * std::pow(10.0, 1.5)).epsilon(1e-12));
    REQUIRE(snr_to_power(10.0, 2.0) == Catch::Approx(40.0));
    REQUIRE(snr_to_relay_power(10.0, 1.0) == Catch::Approx(10.0));
    REQUIRE_THROWS_AS(snr_to_power(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("reciprocal channels transpose the uplink")
{
    ChannelSet cs = generate_real_channel(3, 2, true, 9);
    REQUIRE(cs.h_ra == cs.h_ar.transpose());
    REQUIRE(cs.h_rb == cs.h_br.transpose());
}

TEST_CASE("channel file round trip is exact")
{
    ChannelSet cs = generate_real_channel(3, 2, false, 31);
    std::stringstream ss;
    save_channel_set(ss, cs);
    LoadedChannel loaded = load_channel_set(ss);
    REQUIRE(std::holds_alternative<ChannelSet>(loaded));
    const ChannelSet& back = std::get<ChannelSet>(loaded);
    REQUIRE(back.h_ar == cs.h_ar);
    REQUIRE(back.h_br == cs.h_br);
    REQUIRE(back.h_ra == cs.h_ra);
    REQUIRE(back.h_rb == cs.h_rb);

    ComplexChannelSet ccs = generate_complex_channel(2, 2, false, 32);
    std::stringstream s2;
    save_channel_set(s2, ccs);
    LoadedChannel loaded2 = load_channel_set(s2);
    REQUIRE(std::holds_alternative<ComplexChannelSet>(loaded2));
    REQUIRE(std::get<ComplexChannelSet>(loaded2).h_ar == ccs.h_ar);
}

TEST_CASE("channel file validation")
{
    std::stringstream bad("edapnc-channel 1\nn_t 1\nn_r 2\nfield real\n");
    REQUIRE_THROWS_AS(load_channel_set(bad), std::invalid_argument);

    std::stringstream rankdef("edapnc-channel 1\nn_t 2\nn_r 2\nfield real\n"
                              "h_ar\n1 0\n1 0\nh_br\n1 0\n0 1\n"
                              "h_ra\n1 0\n0 1\nh_rb\n1 0\n0 1\n");
    REQUIRE_THROWS_AS(load_channel_set(rankdef), std::runtime_error);
}

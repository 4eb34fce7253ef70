#ifndef EDAPNC_RNG_HPP
#define EDAPNC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace edapnc {

// All randomness in the library flows through this file. The generator is
// std::mt19937_64 (bit-exact across platforms per the C++ standard); the
// uniform and Gaussian mappings below are spelled out explicitly instead of
// relying on std::*_distribution, whose output is implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Sub-seed splitting rule: stream k draws the first splitmix64 output of the
// state master_seed XOR (k+1)*0x9E3779B97F4A7C15. Workers processing streams
// in any order therefore see identical per-stream seeds.
inline std::uint64_t derive_subseed(std::uint64_t master_seed, std::uint64_t stream)
{
    std::uint64_t state = master_seed ^ ((stream + 1) * 0x9E3779B97F4A7C15ull);
    return splitmix64(state);
}

class GaussianSampler
{
  public:
    explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0,1) from the top 53 bits of one generator draw.
    double uniform()
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one transform yields two variates.
    double normal()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform(); // (0,1], keeps log() finite
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * pi_ * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    static constexpr double pi_ = 3.14159265358979323846;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace edapnc

#endif

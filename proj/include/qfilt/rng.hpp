#ifndef QFILT_RNG_HPP
#define QFILT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace qfilt {

/// Identifies one reproducible random stream: a master seed shared by the
/// whole experiment and the index of the simulated path.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
};

namespace detail {

/// SplitMix64 finalizer; decorrelates nearby seed values.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Per-path random stream with fully specified output: the engine is the
/// standard 64-bit Mersenne twister and the variate transforms below are
/// spelled out here, so identical SeedSpec values give identical draws on
/// every platform.
class RngStream {
public:
    explicit RngStream(SeedSpec seed)
        : engine_(detail::mix64(detail::mix64(seed.master_seed) +
                                0x9E3779B97F4A7C15ULL * (seed.path_index + 1))) {}

    /// Uniform draw in (0, 1].
    double uniform() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal draw via the Box-Muller transform.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        constexpr double two_pi = 6.283185307179586476925287;
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = two_pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Bernoulli draw; probabilities outside [0, 1] are clamped.
    bool bernoulli(double prob) {
        return uniform() <= prob;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace qfilt

#endif // QFILT_RNG_HPP

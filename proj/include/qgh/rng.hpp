#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qgh/util.hpp"

namespace qgh {

/// splitmix64 step, used to derive independent stream seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic random stream. All sampling in the library goes through
/// this type so that a (seed, stream) pair fully determines every draw;
/// std::mt19937_64 output is specified by the standard, and the Gaussian
/// transform below is fixed rather than implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed;
        std::uint64_t mixed = splitmix64(s);
        s = mixed ^ (0xda3e39cb94b95bdbull * (stream + 1));
        engine_.seed(splitmix64(s));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (no state caching, two uniforms per draw).
    double gaussian() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Complex standard normal: E|z|^2 = 1.
    cplx cgaussian() {
        return cplx(gaussian(), gaussian()) / std::sqrt(2.0);
    }

private:
    std::mt19937_64 engine_;
};

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace qgh

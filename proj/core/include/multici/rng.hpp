#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace multici {

// Uniform draw in [0, 1) from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined; this mapping keeps
// traces reproducible across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    const double x = lo + uniform01(rng) * (hi - lo);
    return x < lo ? lo : (x > hi ? hi : x);
}

// Standard normal via Box-Muller; consumes exactly two engine outputs so the
// draw count stays deterministic.
inline double normal01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace multici

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mpi1d {

// Reproducible gaussian stream: std::mt19937_64 (a fully specified, portable
// generator) feeding a hand-written Box-Muller transform.  std::normal_
// distribution is implementation-defined and would break cross-platform
// reproducibility, so it is deliberately not used.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0, 1) from the top 53 bits of one 64-bit draw.
    double uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

    // Standard normal via Box-Muller; draws a (cos, sin) pair and caches the
    // second value.  u1 is mapped into (0, 1] so the logarithm is finite.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace mpi1d

#pragma once

#include <cstdint>

namespace gcm {

/// SplitMix64 (Steele, Lea, Flood): a counter-based 64-bit generator with
/// platform-independent output.  One stream per run; uniforms are built from
/// the top 53 bits so trajectories are bit-identical across standard
/// libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Symmetric uniform on [-eps, eps].
    double symmetric(double eps) { return eps * (2.0 * uniform01() - 1.0); }

private:
    std::uint64_t state_;
};

} // namespace gcm

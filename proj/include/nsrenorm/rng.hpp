#pragma once

#include <cstdint>
#include <cmath>

namespace nsrenorm {

/// Deterministic random stream built on splitmix64 output mixing.
///
/// std::normal_distribution and generate_canonical are implementation-defined,
/// which would break cross-platform reproducibility of seeded experiments.
/// This generator produces identical draws for identical seeds everywhere
/// (up to libm ulps in the Box-Muller transcendentals).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (polar-free form; deterministic).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // avoid log(0)
        while (u1 <= 0.0) u1 = uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Derives an independent substream seed from (root, stream, index).
/// Used so that sample i of an estimator always sees the same draws
/// regardless of sample count or thread scheduling.
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
    Rng mix(root ^ (0x517cc1b727220a95ull * (stream + 1)));
    std::uint64_t a = mix.next_u64();
    Rng mix2(a ^ (0x2545f4914f6cdd1dull * (index + 1)));
    return mix2.next_u64();
}

} // namespace nsrenorm

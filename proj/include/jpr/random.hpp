#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace jpr {

/// Counter-based generator keyed by (seed, stream). Identical keys replay the
/// identical draw sequence on every platform and thread schedule; distinct
/// stream ids give streams suitable for one-stream-per-replicate parallelism.
///
/// The core is the splitmix64 output mix over a Weyl counter, so a stream is
/// fully defined by its derived base offset.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
        base_ = mix(mix(seed) ^ mix(stream ^ 0x6a09e667f3bcc909ULL));
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Derived generator for nested resampling (inner bootstrap replicates).
    RandomSource substream(std::uint64_t index) const {
        RandomSource child(seed_, mix(stream_ * 0xd1b54a32d192ed03ULL + index + 1));
        return child;
    }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = base_ + counter_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe under log().
    double uniform01_open_low() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n) {
        for (;;) {
            std::uint64_t x = next_u64();
            std::uint64_t r = x % n;
            if (x - r <= ~std::uint64_t{0} - n + 1) return r;
        }
    }

    /// Standard normal via Box-Muller; the spare draw is cached per stream.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01_open_low();
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Geometric block length with the given mean (support {1, 2, ...}).
    std::uint64_t geometric(double mean) {
        if (mean <= 1.0) return 1;
        double success = 1.0 / mean;
        double u = uniform01_open_low();
        double len = 1.0 + std::floor(std::log(u) / std::log1p(-success));
        if (len < 1.0) return 1;
        if (len > 1e18) return static_cast<std::uint64_t>(1e18);
        return static_cast<std::uint64_t>(len);
    }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace jpr

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace hydroradar {

/// Deterministic random source for the synthesis paths. All sampling is
/// implemented on top of the raw mt19937_64 stream so that a given seed
/// produces the same values regardless of the standard library's
/// distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Normal(mean, stddev) restricted to (lo, hi] by rejection; falls back
    /// to clamping if the interval mass is negligible.
    double truncated_normal(double mean, double stddev, double lo, double hi) {
        if (stddev <= 0.0) {
            return std::min(std::max(mean, std::nextafter(lo, hi)), hi);
        }
        for (int i = 0; i < 1000; ++i) {
            const double v = normal(mean, stddev);
            if (v > lo && v <= hi) return v;
        }
        return std::min(std::max(mean, std::nextafter(lo, hi)), hi);
    }

    /// Poisson count (Knuth's product method; rates here are small).
    int poisson(double rate) {
        if (rate < 0.0 || !std::isfinite(rate)) {
            throw std::domain_error("poisson: rate must be finite and >= 0");
        }
        if (rate == 0.0) return 0;
        const double limit = std::exp(-rate);
        int k = 0;
        double prod = 1.0;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k - 1;
    }

    /// Decorrelated child seed for stream `index` (splitmix64 finalizer), so
    /// per-run generators can run in parallel yet match sequential output.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace hydroradar

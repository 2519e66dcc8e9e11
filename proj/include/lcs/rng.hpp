#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lcs {

// Deterministic random stream. All derived draws (uniform doubles, bounded
// integers, gaussians) are computed from the raw mt19937_64 output with fixed
// arithmetic, so equal seeds give equal sequences on every platform. The
// standard-library distributions are deliberately avoided: their algorithms
// are implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n). n must be > 0. Modulo bias is ~n/2^64.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    // Uniform integer in [lo, hi] inclusive.
    int range_int(int lo, int hi) {
        return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; caches the second variate.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace lcs

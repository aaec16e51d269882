#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bclass {

/// Seeded random stream with splittable sub-streams.
///
/// One stream per chain and one per augmentation draw keeps the two
/// randomness sources independently reproducible. All distribution
/// transforms are implemented here rather than via <random>
/// distributions, whose output is implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

    /// Derive an independent stream identified by `id`.
    RngStream substream(std::uint64_t id) const {
        return RngStream(mix(seed_ ^ mix(id + 0x9e3779b97f4a7c15ull)));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal draw (Box-Muller, cached spare).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bclass

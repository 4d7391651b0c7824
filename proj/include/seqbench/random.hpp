#pragma once

#include <cstdint>
#include <random>

namespace seqbench {

// Platform-independent random stream: std::mt19937_64 is bit-exact across
// standard libraries, the <random> distributions are not, so the draws are
// derived by hand.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of the index-th independent stream under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace seqbench

#pragma once

#include <cstdint>
#include <random>

namespace evospike {

// splitmix64 finalizer; spreads nearby inputs across the full 64-bit range
constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
    return mix64(seed ^ (value + 0x9e3779b97f4a7c15ull + (seed << 12) + (seed >> 4)));
}

// What a derived stream is consumed for. Part of the seed path, so streams
// with equal (trial, generation, index) but different purposes stay disjoint.
enum class StreamPurpose : std::uint64_t {
    population_init = 1,  // initial genomes of a trial
    evaluation = 2,       // connectivity build + simulation of one individual
    breeding = 3,         // pairing, crossover and mutation of one generation
};

// Deterministic child seed for the stream at (trial, generation, index, purpose).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                 std::uint64_t generation, std::uint64_t index,
                                 StreamPurpose purpose) {
    std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ull);
    h = hash_combine(h, trial);
    h = hash_combine(h, generation);
    h = hash_combine(h, index);
    h = hash_combine(h, static_cast<std::uint64_t>(purpose));
    return h;
}

// A seeded random stream. Unit doubles are built from the raw 64-bit output
// rather than std::uniform_real_distribution, which is not pinned by the
// standard; everything produced here is reproducible from the seed alone.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1), 53-bit resolution
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, n), unbiased via rejection
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace evospike

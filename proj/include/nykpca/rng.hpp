#pragma once

#include <cstdint>

namespace nykpca {

// SplitMix64 (Steele, Lea & Flood 2014; public-domain reference by Vigna,
// https://prng.di.unimi.it/splitmix64.c). Chosen as the project-wide PRNG
// because the algorithm is published, tiny, and bit-exact across
// implementations, so every seeded result in this library is reproducible
// from the documented recurrence alone:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Seed 0 is valid. Derived quantities are defined on top of next():
//   next_double():       (next() >> 11) * 2^-53, uniform in [0, 1)
//   next_below(bound):   unbiased via rejection below 2^64 - 2^64 % bound,
//                        then next() % bound
//   rademacher():        +1 if lowest bit of next() set, else -1
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_below(std::uint64_t bound) {
        // rejection sampling; bound == 0 is the caller's bug
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    double rademacher() {
        return (next() & 1ULL) ? 1.0 : -1.0;
    }

private:
    std::uint64_t state_;
};

// splitmix64 finalizer applied to a single word
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Sub-seed derivation for parallel/nested randomized steps:
//   derive_seed(master, k) = mix64(master ^ mix64(k + 1))
// Distinct k give statistically independent streams and the rule is part of
// the reproducibility contract (experiment files document the k they used).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
    return mix64(master ^ mix64(k + 1));
}

}  // namespace nykpca

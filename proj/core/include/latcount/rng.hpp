#pragma once

#include <cstdint>

// Counter-based deterministic random numbers.
//
// Every draw is a pure function of (seed, stream, counter), so sampling can be
// partitioned across any number of workers by splitting counter ranges and the
// results are bit-identical regardless of the schedule.  Quality is SplitMix64
// finalizer chained three times, which is plenty for Monte Carlo use.

namespace latcount {

inline constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr uint64_t rng_u64(uint64_t seed, uint64_t stream, uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Uniform in [0, 1), 53-bit mantissa.
inline double rng_unit(uint64_t seed, uint64_t stream, uint64_t counter) {
    return static_cast<double>(rng_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Uniform in [0, 1), never exactly 0 (safe as a CDF argument).
inline double rng_unit_open(uint64_t seed, uint64_t stream, uint64_t counter) {
    return (static_cast<double>(rng_u64(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes counters 2k and 2k+1.
double rng_gauss(uint64_t seed, uint64_t stream, uint64_t counter);

}  // namespace latcount

#pragma once

#include <cstdint>
#include <random>

namespace cpsc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-trial engine keyed by (master seed, stream, trial). Trials are
/// independent of execution order, so sweeps parallelize and replay
/// without coordination. `stream` is the SNR-grid index in sweeps.
inline std::mt19937_64 make_trial_rng(std::uint64_t master_seed,
                                      std::uint64_t stream,
                                      std::uint64_t trial) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(s);
    s ^= trial * 0xda942042e4dd58b5ULL + 0x9e6c63d0a9e229e3ULL;
    std::uint64_t c = splitmix64(s);
    return std::mt19937_64(a ^ (b * 0x9e3779b97f4a7c15ULL) ^ c);
}

}  // namespace cpsc

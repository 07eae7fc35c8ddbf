#pragma once

#include <cstdint>

namespace nilspec {

// SplitMix64. Deterministic across platforms, unlike the standard library
// distributions, so seeded runs produce byte-identical reports everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform-ish integer in [lo, hi]; modulo bias is irrelevant here
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return (next() & 1) != 0; }

private:
    std::uint64_t state_;
};

// Derives independent sub-seeds so parallel or per-trial streams never share state.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (salt * 0xd1b54a32d192ed03ULL));
    r.next();
    return r.next();
}

} // namespace nilspec

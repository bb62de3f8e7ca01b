#pragma once
#include <cstdint>

namespace disperse {

// Counter-based pseudo-randomness (splitmix64 finalizer). Every draw is a
// pure function of (seed, entity, counter), so substreams are independent,
// random-access, and identical no matter which process consumes them. The
// coupled region/path/TASEP runs rely on exactly this property.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double to_unit(uint64_t u) { return double(u >> 11) * 0x1.0p-53; }

// Bernoulli wake stream for one entity. entity -1 is reserved for the source.
class WakeStream {
public:
    WakeStream(uint64_t master_seed, int64_t entity)
        : key_(mix64(master_seed + 0x9e3779b97f4a7c15ULL * uint64_t(entity + 2))) {}

    uint64_t raw(uint64_t t) const { return mix64(key_ + 0xd1b54a32d192ed03ULL * t); }
    double uniform(uint64_t t) const { return to_unit(raw(t)); }
    bool awake(uint64_t t, double p) const { return p >= 1.0 || uniform(t) < p; }

private:
    uint64_t key_;
};

inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    return mix64(seed ^ mix64(index + 0x2545f4914f6cdd1dULL));
}

// Small deterministic generator for environment construction.
class SplitMix {
public:
    explicit SplitMix(uint64_t seed) : state_(seed) {}
    uint64_t next() { return mix64(state_++); }
    // uniform integer in [0, m), m >= 1
    uint64_t below(uint64_t m) {
        return uint64_t((__uint128_t(next()) * m) >> 64);
    }

private:
    uint64_t state_;
};

}  // namespace disperse

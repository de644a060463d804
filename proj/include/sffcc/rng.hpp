#pragma once

#include <cstdint>

namespace sffcc {

inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded via splitmix64. Self-contained so that streams are
// bit-identical across platforms and standard library versions.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto &w : s_) w = splitmix64(sm);
    }

    // Independent per-trial stream derived from a base seed and a counter.
    static Rng for_trial(uint64_t base_seed, uint64_t trial_index) {
        uint64_t sm = base_seed ^ (0xd1342543de82ef95ULL * (trial_index + 1));
        return Rng(splitmix64(sm));
    }

    uint64_t next_u64() {
        uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }

    // Uniform in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    bool next_bool() { return next_u64() >> 63; }

    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        // Rejection-free is unnecessary here; modulo bias is negligible for
        // the small ranges used, but keep it exact anyway.
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace sffcc

#ifndef CFHM_RNG_HPP
#define CFHM_RNG_HPP

#include <cstdint>

namespace cfhm {

// Counter-based deterministic RNG. The i-th output is a pure function of
// (key, i): the SplitMix64 finalizer applied to key + i * golden ratio.
// Identical (seed, stream) always yields the identical sequence on every
// platform, and the draw counter is inspectable for reproducibility logs.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream ^ 0x6a09e667f3bcc909ULL))), counter_(0) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    // Unbiased uniform draw from [0, n). Rejection sampling on the top range.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) { next_u64(); return 0; }
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Independent substream derived from this generator's key and a label.
    CounterRng child(std::uint64_t label) const {
        return CounterRng(key_, mix(label) ^ 0x9e3779b97f4a7c15ULL);
    }

    std::uint64_t draws() const { return counter_; }
    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace cfhm

#endif  // CFHM_RNG_HPP

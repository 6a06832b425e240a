#pragma once

#include <cstdint>

namespace scalekit {

// SplitMix64 generator. std::mt19937 plus the standard distributions is not
// bit-reproducible across standard libraries; reports promise byte-identical
// output for a fixed seed, so the generator is pinned here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive bounds, rejection-free modulo bias below 2^-64 scale avoided
    // by rejection sampling
    long long uniform_int(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return lo + static_cast<long long>(r % span);
    }

    // independent derived stream, e.g. one per trial
    Rng fork(std::uint64_t stream) const {
        Rng child(state_ ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

}  // namespace scalekit

#pragma once

#include <cstdint>

namespace bellkit {

/// Identifies one reproducible random stream. Identical (seed, stream)
/// pairs produce bit-identical output sequences.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Counter-based splittable generator in the SplitMix64 family: the n-th
/// output is a pure function of (seed, stream, n), so disjoint trial
/// blocks can be generated independently and merged deterministically.
class SplitStream {
public:
    explicit SplitStream(RngSeed s)
        : key_(mix64(s.seed ^ UINT64_C(0x9E3779B97F4A7C15))),
          gamma_(make_gamma(s.stream)) {}

    /// Output for counter value n, independent of generator state.
    std::uint64_t at(std::uint64_t n) const { return mix64(key_ + gamma_ * (n + 1)); }

    /// Uniform double in [0,1) for counter value n.
    double unit_at(std::uint64_t n) const {
        return static_cast<double>(at(n) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return at(counter_++); }
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    bool next_bernoulli(double p) { return next_unit() < p; }

    std::uint64_t counter() const { return counter_; }
    void seek(std::uint64_t n) { counter_ = n; }

private:
    static std::uint64_t mix64(std::uint64_t z) {
        z += UINT64_C(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
        return z ^ (z >> 31);
    }
    // Per-stream odd increment, as in SplittableRandom.
    static std::uint64_t make_gamma(std::uint64_t stream) {
        return mix64(stream ^ UINT64_C(0xBF58476D1CE4E5B9)) | 1u;
    }

    std::uint64_t key_;
    std::uint64_t gamma_;
    std::uint64_t counter_ = 0;
};

} // namespace bellkit

#pragma once

#include <cstdint>

namespace zonogini {

/// Counter-based SplitMix64. A stream is a 64-bit key; draw i of the stream
/// is a pure function of (key, i), so index ranges can be handed to parallel
/// workers and the output never depends on evaluation order or thread count.
/// Child streams are derived by hashing tags into the key.
namespace rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Child key for (parent, tag). Chain for multi-part tags.
inline constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t tag) {
    return mix64(key ^ (mix64(tag + kGamma) + 0x632BE59BD9B4E019ull));
}

inline constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
    return derive(derive(key, a), b);
}

inline constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t a, std::uint64_t b,
                                      std::uint64_t c) {
    return derive(derive(key, a, b), c);
}

class Stream {
public:
    explicit constexpr Stream(std::uint64_t key) : key_(key) {}

    constexpr std::uint64_t next_u64() { return mix64(key_ + ++counter_ * kGamma); }

    /// Uniform draw in the open interval (0,1); safe as input to inverse CDFs.
    double next_open_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform draw in [0,1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    constexpr Stream split(std::uint64_t tag) const { return Stream(derive(key_, tag)); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace rng
}  // namespace zonogini

#pragma once

#include <cstdint>
#include <string_view>

namespace htc {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based uniform stream: draw i is a pure function of (seed, i), so
/// any partitioning of the index range across threads yields the same values.
class CounterStream {
public:
    explicit constexpr CounterStream(std::uint64_t seed) noexcept : key_(mix64(seed)), seed_(seed) {}

    constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
        return mix64(key_ + (index + 1) * kGamma);
    }

    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    constexpr double uniform(std::uint64_t index) const noexcept {
        return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Independent stream keyed by (seed, id).
    constexpr CounterStream substream(std::uint64_t id) const noexcept {
        return CounterStream(mix64(key_ ^ mix64(id + kGamma)));
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
    std::uint64_t seed_;
};

/// Per-job seed derived from a master seed and a job tag (FNV-1a of the tag, then mixed).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return mix64(master ^ mix64(h));
}

}  // namespace htc

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace actnet {

using Engine = std::mt19937_64;

/// Seed plus sub-stream label. Identical (seed, stream) pairs always yield the
/// same draw sequence; children derived with child() are independent streams.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngSeed() = default;
    RngSeed(std::uint64_t seed_, std::uint64_t stream_ = 0) : seed(seed_), stream(stream_) {}

    /// Sub-stream `index` of this stream. Children of distinct parents or
    /// distinct indices do not collide in practice (splitmix64 mixing).
    RngSeed child(std::uint64_t index) const;

    /// Sub-stream selected by a textual label (FNV-1a hashed).
    RngSeed labelled(std::string_view label) const;

    Engine engine() const;

    /// Single 64-bit value identifying (seed, stream), for logs and CSVs.
    std::uint64_t fingerprint() const;

    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace actnet

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>

namespace gpf {

/// Purpose tags that keep streams for different tasks disjoint even when the
/// numeric keys coincide.
enum class Stream : std::uint64_t {
    Generic = 0,
    Camera = 1,
    Photon = 2,
    FieldInit = 3,
    Batch = 4,
    PathTracer = 5,
    Dataset = 6,
    GpfRender = 7,
};

/// Counter-based generator: the state is a hash of (seed, stream, keys...), and
/// draws advance a SplitMix64 sequence from there. Two Rngs built from the same
/// arguments produce the same draws; work items keyed by their own indices are
/// independent of scheduling order.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(mix(seed)) {}
    Rng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> keys)
        : state_(mix(seed ^ mix(static_cast<std::uint64_t>(stream) + 0x632be59bd9b4e019ULL))) {
        for (std::uint64_t k : keys) state_ = mix(state_ ^ mix(k + 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        // Lemire's multiply-shift; bias is below 2^-64 * n.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace gpf

#pragma once

#include <cstdint>
#include <random>

namespace bdris {

// SplitMix64 finalizer. Used to derive decorrelated substreams from one
// user-facing seed so that trial i never shares state with trial j.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

enum class StreamTag : std::uint64_t {
    channels = 1,
    precoder = 2,
    init = 3,
    baseline = 4,
};

// One generator per (seed, trial, purpose). Every random draw in the library
// flows through here; nothing reads global RNG state.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t trial, StreamTag tag) {
    const std::uint64_t s = mix64(seed ^ mix64(trial ^ mix64(static_cast<std::uint64_t>(tag))));
    return std::mt19937_64{s};
}

} // namespace bdris

#pragma once

#include <cstdint>
#include <string_view>

namespace doob::rng {

// SplitMix64 finalizer. All randomness in the project flows from one root
// seed through named substreams of this mixer, so reruns are byte-identical
// and samples are independent of thread scheduling.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the stream name
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return mix(seed ^ h);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(seed ^ mix(index + 0x51ed270b7a64f43bull));
}

// Counter-based stream: state advances by the golden ratio, outputs are the
// mixed counter. Sequence is fully determined by the seed.
struct Stream {
    std::uint64_t state;

    explicit Stream(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() { return mix(state += 0x9e3779b97f4a7c15ull); }

    // uniform in the open interval (0,1); 53-bit resolution
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    bool coin() { return next() & 1u; }

    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

}  // namespace doob::rng

// rng.hpp
//
// Counter-based random streams. A stream is a key plus a counter; draw i is
// mix(key + i * gamma) with the SplitMix64 finaliser. Keys are derived from
// (seed, vertex, replicate, purpose) so every vertex of every replicate gets its
// own independent stream regardless of evaluation order or thread schedule.
#pragma once

#include <cstdint>
#include <limits>

namespace hboot {

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class StreamPurpose : std::uint64_t { leaf_population = 1, resample = 2, sweep = 3 };

class CounterStream {
public:
    using result_type = std::uint64_t;

    constexpr CounterStream() = default;
    explicit constexpr CounterStream(std::uint64_t key) : key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() { return mix64(key_ + (++counter_) * golden_gamma); }

    constexpr std::uint64_t key() const { return key_; }
    constexpr std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t vertex, std::uint64_t replicate,
                                   StreamPurpose purpose) {
    std::uint64_t k = mix64(seed + golden_gamma);
    k = mix64(k ^ mix64(vertex + 0x632be59bd9b4e019ULL));
    k = mix64(k ^ mix64(replicate + 0x8cb92ba72f3d8dd7ULL));
    k = mix64(k ^ mix64(static_cast<std::uint64_t>(purpose) + 0xd1b54a32d192ed03ULL));
    return k;
}

// Hands out the streams of one replicate.
class StreamSeeder {
public:
    constexpr StreamSeeder(std::uint64_t seed, std::uint64_t replicate) : seed_(seed), replicate_(replicate) {}

    constexpr CounterStream stream(int vertex, StreamPurpose purpose) const {
        return CounterStream(stream_key(seed_, static_cast<std::uint64_t>(vertex), replicate_, purpose));
    }

    constexpr std::uint64_t seed() const { return seed_; }
    constexpr std::uint64_t replicate() const { return replicate_; }

private:
    std::uint64_t seed_;
    std::uint64_t replicate_;
};

} // namespace hboot

#pragma once

#include <cstdint>
#include <random>

namespace ldao {

// SplitMix64 finalizer. Used to derive decorrelated child seeds so that
// parallel work units draw from independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for work unit `index` of the stream identified by `tag`.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(tag)) + index);
}

// Stream tags. Distinct per subsystem so reusing one global seed across the
// pipeline never aliases two streams.
namespace stream {
constexpr std::uint64_t kmeans_fit = 0x01;
constexpr std::uint64_t kmeans_restart = 0x02;
constexpr std::uint64_t sampling = 0x03;
constexpr std::uint64_t cv_shuffle = 0x04;
constexpr std::uint64_t cv_fold = 0x05;
} // namespace stream

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

} // namespace ldao

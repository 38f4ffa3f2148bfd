#pragma once

#include <cstdint>
#include <utility>

namespace girgmotif {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent seed for a named sub-stream of `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0,1) from the top 53 bits.
inline double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Counter-based uniform for the unordered pair {u,v}; the same value no matter
/// in which order or on which thread pairs are visited.
inline double pair_uniform(std::uint64_t seed, std::uint64_t u, std::uint64_t v) {
    if (u > v) std::swap(u, v);
    std::uint64_t h = splitmix64(seed ^ splitmix64(u * 0x100000001b3ULL + 0x9e37));
    return to_unit(splitmix64(h ^ (v + 0x7f4a7c15ULL)));
}

} // namespace girgmotif

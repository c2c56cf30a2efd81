#ifndef FAIRMIT_RNG_HPP
#define FAIRMIT_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace fairmit {

// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed fan-out: one global seed plus a component tag and
// indices yields an independent stream. Used everywhere a sub-result
// must be reproducible on its own.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
    for (unsigned char c : tag) h = mix64(h ^ c);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Uniform in [0,1) with 53 random bits; avoids distribution objects so the
// draw sequence is pinned down exactly.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace fairmit

#endif

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bgpimpact {

// All randomness in the library flows through these helpers so that results
// are bit-identical across platforms and standard-library implementations
// (std::mt19937_64 is specified exactly; the std distributions are not).

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed, a role tag and an index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index = 0) {
    return splitmix64(splitmix64(base ^ splitmix64(tag)) ^ index);
}

using Rng = std::mt19937_64;

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform_double(Rng& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = std::size_t(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// First k elements of a seeded Fisher-Yates shuffle of `pool` (partial shuffle).
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t k, Rng& rng) {
    if (k > pool.size()) k = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + std::size_t(uniform_index(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace bgpimpact

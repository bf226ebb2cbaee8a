#ifndef QLM_RNG_HPP
#define QLM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace qlm {

// splitmix64, used to derive independent per-repetition streams from
// (seed, index) without correlation between adjacent seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

// Uniform in [0,1). Written out explicitly (not uniform_real_distribution,
// whose output is implementation-defined) so results replicate across
// standard libraries.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

inline double exponential(std::mt19937_64& g) {
    return -std::log1p(-uniform01(g));
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) {  // inclusive
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(g() % span);
}

}  // namespace qlm

#endif

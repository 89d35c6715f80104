#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rtsgen {

// splitmix64 finalizer; used to derive independent substreams from one seed.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(a ^ mix64(b)); }
inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) { return mix64(mix64(a, b), c); }

// Deterministic RNG stream. mt19937_64 raw output is pinned by the standard,
// so replays are stable across compilers. The <random> distributions are NOT
// pinned, which is why the bounded draws live here instead.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : engine_(mix64(seed)) {}

    uint64_t next() { return engine_(); }

    // Uniform in [0, n). Multiply-shift map; bias is O(n / 2^64), irrelevant
    // for the small ranges used here.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<uint64_t>(n))); }

    // Uniform in [lo, hi], inclusive.
    int range(int lo, int hi) { return lo + below_int(hi - lo + 1); }

    // Uniform in [0, 1).
    double unit_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// FNV-1a over raw bytes; stable fingerprint for event logs and replays.
inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace rtsgen

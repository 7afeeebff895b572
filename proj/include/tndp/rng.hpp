#pragma once

#include <cstdint>
#include <random>

namespace tndp {

/// SplitMix64 finalizer; used to whiten seeds and derive child streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seedable random source. All randomness in the project flows through this
/// type so results are reproducible from a single seed.
///
/// Stream-splitting rule: child stream k of seed s is seeded with
/// s ^ splitmix64(k + 1). One child stream per particle per run keeps batch
/// results independent of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return Rng(seed ^ splitmix64(stream_id + 1));
    }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace tndp

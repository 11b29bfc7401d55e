#pragma once

#include <cstdint>
#include <limits>

namespace asep {

// SplitMix64 finalizer. Also the documented per-trial seed derivation:
// trial_seed(master, i) = mix64(master ^ mix64(i + 0x9E3779B97F4A7C15)).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 0x9E3779B97F4A7C15ull));
}

// Counter-based key for (seed, edge, slab); used by the clock source so that a given
// edge sees the same events no matter which window is simulated.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::int64_t edge, std::int64_t slab) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(edge) * 0xD1B54A32D192ED03ull);
    return mix64(h ^ static_cast<std::uint64_t>(slab) * 0x8CB92BA72F3D8DD7ull);
}

// Small sequential generator for counter-keyed streams.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t state) : s_(state) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t s_;
};

template <class Gen>
double uniform01(Gen& g) {
    static_assert(Gen::min() == 0 && Gen::max() == std::numeric_limits<std::uint64_t>::max(),
                  "expects a full-range 64-bit generator");
    return static_cast<double>((g() - Gen::min()) >> 11) * 0x1.0p-53;
}

} // namespace asep

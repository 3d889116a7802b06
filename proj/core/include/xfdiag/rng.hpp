#pragma once

#include <cmath>
#include <cstdint>

namespace xfdiag {

// SplitMix64 finalizer, the mixing core behind all seeding in this project.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for the ordinal-th item of a stream keyed by `master`. Any item can be
// regenerated independently of the rest of the stream.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t ordinal) noexcept {
    return mix64(master ^ mix64(ordinal + 1));
}

// Counter-based generator: output i is a pure function of (seed, i), so a
// stream never depends on what other streams have drawn.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix64(seed_ ^ mix64(counter_++)); }

    // uniform in [0, 1)
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n), n > 0
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // standard normal via Box-Muller; always consumes two counter slots
    double next_normal() {
        const double u1 = 1.0 - next_uniform();  // (0, 1]
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace xfdiag

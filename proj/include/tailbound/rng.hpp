// rng.hpp
//
// Counter-based pseudo-random generator with O(1) random access.
//
// The verification suites shard Monte Carlo replications across worker
// threads and still promise byte-identical output for any worker count.
// That requires the k-th draw of the r-th replication to be a pure
// function of (seed, r, k), independent of scheduling. A keyed SplitMix64
// stream provides exactly that: the n-th output is finalize(base + (n+1)*g)
// for the Weyl constant g, so any position can be computed directly.

#pragma once

#include <cmath>
#include <cstdint>

namespace tailbound {

// SplitMix64 finalizer (Vigna's variant of the MurmurHash3 mixer).
// Bijective on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : base_(mix64(mix64(seed) ^ (stream * 0xda942042e4dd58b5ull))) {}

    // Raw 64-bit word at an absolute position, ignoring the cursor.
    std::uint64_t at(std::uint64_t counter) const noexcept {
        return mix64(base_ + (counter + 1) * kGamma);
    }

    std::uint64_t next_u64() noexcept { return at(counter_++); }

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1); never returns an endpoint, safe under log().
    double next_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes two words per call.
    double next_normal() noexcept {
        const double u = next_open();
        const double v = next_unit();
        return std::sqrt(-2.0 * std::log(u)) *
               std::cos(2.0 * 3.14159265358979323846 * v);
    }

    // Uniform integer on [0, bound) by multiply-high range reduction.
    // Bias is at most bound / 2^64, negligible for the bounds used here.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        const unsigned __int128 wide =
            static_cast<unsigned __int128>(next_u64()) *
            static_cast<unsigned __int128>(bound);
        return static_cast<std::uint64_t>(wide >> 64);
    }

    std::uint64_t cursor() const noexcept { return counter_; }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

// Seed for one operation of a multi-suite run: decorrelates suites that
// share the experiment seed.
constexpr std::uint64_t derive_seed(std::uint64_t experiment_seed,
                                    std::uint64_t suite_index) noexcept {
    return mix64(experiment_seed ^ mix64(suite_index + 0x51edce1cdf2d4c11ull));
}

} // namespace tailbound

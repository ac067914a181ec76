#ifndef BLOCKBOOT_RNG_HPP_
#define BLOCKBOOT_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "blockboot/common.hpp"

namespace blockboot {

// SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment variant). Chosen over
// std::mt19937 + <random> distributions because every draw here must be
// bit-identical across platforms and standard-library versions.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1), 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1]; safe as a log() argument.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (cosine branch only). Consumes exactly
    // two u64 per draw, so stream positions are arithmetic in the draw count.
    double next_normal() {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // Exponential with rate 1, i.e. mean 1.
    double next_exponential() {
        return -std::log(next_unit_open());
    }

    // Uniform on (-sqrt(3), sqrt(3)): mean 0, variance 1.
    double next_uniform_sym() {
        return (2.0 * next_unit() - 1.0) * std::sqrt(3.0);
    }

  private:
    std::uint64_t state_;
};

// Disjoint seed namespaces. Streams derived under different domains never
// collide even for equal indices.
namespace seed_domain {
inline constexpr std::uint64_t kSeedGroup = 0x01;
inline constexpr std::uint64_t kOuterReplicate = 0x02;
inline constexpr std::uint64_t kBootstrapReplicate = 0x03;
inline constexpr std::uint64_t kSideMc = 0x04;
inline constexpr std::uint64_t kHeldOut = 0x05;
}  // namespace seed_domain

// Counter-based child-seed derivation: two rounds of the SplitMix64 finalizer
// over (master, domain, index). Pure function, so replicate r's stream can be
// reconstructed in isolation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain,
                                 std::uint64_t index) {
    auto finalize = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = finalize(master + domain * 0x9E3779B97F4A7C15ULL);
    return finalize(h ^ (index + 1) * 0xBF58476D1CE4E5B9ULL);
}

}  // namespace blockboot

#endif  // BLOCKBOOT_RNG_HPP_

#include "rclust/randkit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rclust {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::string_view label) {
    if (label.empty()) {
        throw std::invalid_argument("RandomStream: stream label must be non-empty");
    }
    if (label.size() > 32) {
        throw std::invalid_argument("RandomStream: stream label longer than 32 bytes");
    }
    base_ = mix(mix(seed + kGamma) ^ fnv1a(label));
    state_ = base_;
}

RandomStream::RandomStream(std::uint64_t raw_state) : base_(raw_state), state_(raw_state) {}

std::uint64_t RandomStream::next_u64() {
    state_ += kGamma;
    return mix(state_);
}

double RandomStream::next_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::choice(std::uint64_t n) {
    if (n == 0) {
        throw std::domain_error("RandomStream::choice: n must be >= 1");
    }
    // Lemire's multiply-shift rejection method.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        std::uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::gaussian() {
    double u1 = next_real();
    double u2 = next_real();
    // Guard against log(0).
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RandomStream RandomStream::substream(std::uint64_t index) const {
    return RandomStream(mix(base_ ^ mix(index * kGamma + kGamma)));
}

}  // namespace rclust

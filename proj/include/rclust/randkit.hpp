#ifndef RCLUST_RANDKIT_HPP
#define RCLUST_RANDKIT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rclust {

// Named, seeded random stream built on SplitMix64.
//
// A stream is a pure function of (seed, label): the same pair replays the
// identical sequence on every platform and thread layout. Distinct labels
// under one seed give independent sequences, so every stochastic choice in
// the pipeline lives on its own substream and parallel schedules cannot
// change results.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string_view label);

    // Next raw 64-bit value.
    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53 bits of resolution.
    double next_real();

    // Uniform index in [0, n) without modulo bias. n must be >= 1.
    std::uint64_t choice(std::uint64_t n);

    // Standard normal via Box-Muller (two uniforms per draw, no cached state).
    double gaussian();

    // Unbiased Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(choice(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    // Child stream keyed by index, e.g. one per kernel feature. Derived from
    // the stream's base state, not its current position, so the order of
    // derivation and drawing does not matter.
    RandomStream substream(std::uint64_t index) const;

private:
    explicit RandomStream(std::uint64_t raw_state);

    std::uint64_t base_;
    std::uint64_t state_;
};

}  // namespace rclust

#endif

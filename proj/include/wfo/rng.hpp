#pragma once

#include <cstdint>
#include <random>

namespace wfo {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// mt19937_64 keyed by (seed, stream, substream) through SplitMix64, so every
/// (iteration, segment) gets an independent, schedule-free sequence. Bounded
/// draws use rejection sampling rather than std distributions, whose output
/// differs across standard libraries.
class StreamRng {
public:
    static constexpr const char* kName = "mt19937_64+splitmix64-streams/v1";

    StreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
        : engine_(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ substream)) {}

    std::uint64_t operator()() { return engine_(); }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x < threshold);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace wfo

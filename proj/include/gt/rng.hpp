#ifndef GT_RNG_HPP
#define GT_RNG_HPP

#include <cstdint>
#include <vector>

namespace gt {

/**
 * SplitMix64 generator (Steele, Lea, Flood 2014).
 *
 * Chosen for reproducibility across platforms: the whole state is one u64,
 * seeding is trivial, and independent streams fall out of the same mixing
 * function (see derive_stream below). Quality is more than enough for
 * Bernoulli sampling and shuffling.
 */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// True with probability p. Exact at the endpoints: p=0 never, p=1 always.
    bool bernoulli(double p) { return next_unit() < p; }

    /// Uniform integer in [0, bound). Lemire multiply-shift with rejection,
    /// so results are unbiased and identical on every platform.
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
};

/**
 * Deterministic stream splitting: maps (base seed, stream index) to a fresh
 * seed with one SplitMix64 scramble of base + golden_gamma * (index + 1).
 * Streams are independent of evaluation order and of how work is divided
 * across threads, which is what makes replicated experiments reproducible.
 */
inline std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t index) {
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Fisher-Yates shuffle, iterating from the back. The loop order is part of
/// the reproducibility contract, so keep it fixed.
template <typename T>
void fisher_yates(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::uint64_t j = rng.next_below(i);
        std::swap(v[i - 1], v[j]);
    }
}

/// Identifier written into run metadata so outputs can be tied to the
/// generator that produced them.
inline constexpr const char* kPrngId = "splitmix64+lemire+fisher-yates";

}  // namespace gt

#endif  // GT_RNG_HPP

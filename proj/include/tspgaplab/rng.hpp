#ifndef TSPGAPLAB_RNG_HPP
#define TSPGAPLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace tspgap {

// All randomness in the library flows through this file so that every
// experiment is reproducible bit-for-bit from its seed alone.
//
// Generator: std::mt19937_64, whose output sequence is pinned by the C++
// standard. Distributions are NOT taken from <random> (their mappings are
// implementation-defined); the mappings below are fixed here instead.

/// SplitMix64 step, used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Unbiased integer in [0, bound) by rejection sampling. bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint64_t x = gen_();
            if (x >= threshold) return x % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double real() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double real(double lo, double hi) { return lo + real() * (hi - lo); }

    /// Fisher-Yates shuffle of v[0..n).
    template <typename T>
    void shuffle(T* v, std::size_t n) {
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace tspgap

#endif

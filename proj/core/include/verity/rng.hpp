#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace verity {

// Mixes a base seed with a textual label (and optional index) into a new seed.
// Used to give every randomized component its own stream so that adding a
// consumer never shifts the draws of another.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);
std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index);

// Deterministic random source. std::mt19937_64 has a pinned algorithm, but the
// standard distributions do not, so every distribution here is implemented by
// hand on top of the raw 64-bit stream. Same seed, same platform-independent
// sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    // Unbiased integer in [0, n) via rejection sampling. n must be > 0.
    std::size_t below(std::size_t n);

    // Standard normal via Box-Muller. Draws two uniforms per call and keeps
    // no cached spare, so the consumed stream length is call-count dependent
    // only.
    double normal();
    double normal(double mean, double stddev);

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(values[i - 1], values[j]);
        }
    }

    // k distinct indices drawn from [0, n), in draw order. k must be <= n.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

private:
    std::mt19937_64 gen_;
};

} // namespace verity

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gtr {

// 64-bit FNV-1a. Also the documented hash of the text feature extractor.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Derives an independent stream seed from the global seed and a stream name,
// e.g. derive_seed(seed, "train/shuffle"). Adding a new stream never shifts
// the values another stream sees.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) noexcept;

// Seeded generator whose draws are identical across standard libraries: the
// engine is mt19937_64 (fully specified) and every distribution below is
// implemented here rather than taken from <random>.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi]; returns lo when lo == hi.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gtr

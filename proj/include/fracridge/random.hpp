#pragma once

#include <cstdint>

namespace fracridge {

/// xoshiro256** seeded through splitmix64. Every draw is defined in terms of
/// 64-bit integer arithmetic, so a seed produces the same stream on any
/// platform. std:: distributions are avoided for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, n), unbiased (rejection sampling).
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via the Marsaglia polar method.
    double normal();

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Derives an independent seed for a named sub-stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace fracridge

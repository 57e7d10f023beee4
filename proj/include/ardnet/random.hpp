#pragma once

#include <cstdint>
#include <initializer_list>

namespace ardnet {

struct Seed {
    std::uint64_t value = 0;
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives an independent child seed by folding each tag into the parent
/// through splitmix64. Order of tags matters.
Seed deriveSeed(Seed parent, std::initializer_list<std::uint64_t> tags) noexcept;

/// xoshiro256** (Blackman & Vigna), state filled from the seed with
/// SplitMix64. Output is identical on every platform; all derived draws
/// below use only IEEE-exact arithmetic plus log/sqrt.
class Rng {
public:
    explicit Rng(Seed seed) noexcept;

    std::uint64_t next() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Standard normal via the Marsaglia polar method. Keeps the spare
    /// variate, so the stream position depends on call history.
    double normal() noexcept;

    /// 1 with probability p, else 0; p outside [0,1] saturates.
    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ardnet

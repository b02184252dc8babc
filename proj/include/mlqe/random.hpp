#pragma once

#include <cstdint>
#include <random>

namespace mlqe {

/// Explicit random stream passed to every sampler. Wraps a 64-bit Mersenne
/// Twister so results are reproducible across platforms for a fixed seed.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform draw on the open interval (0, 1).
    double uniform();

    /// Uniform draw on [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal draw (Box-Muller, one value per call).
    double normal();

    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);

    std::uint64_t next() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; decorrelates adjacent integer seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace mlqe

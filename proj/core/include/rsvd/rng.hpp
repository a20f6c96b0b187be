#pragma once

#include <cstdint>
#include <vector>

#include "rsvd/matrix.hpp"

namespace rsvd {

/// The Gaussian stream algorithm (SplitMix64 + Box-Muller) is fixed; bump this
/// constant if it ever changes so that stored seeds stay interpretable.
inline constexpr int kGaussianStreamVersion = 1;

struct RngSeed {
    std::uint64_t value = 0;

    /// Sub-stream seed for independent trials: seed XOR tag, tag = trial index.
    RngSeed derive(std::uint64_t tag) const { return RngSeed{value ^ tag}; }
};

/// Deterministic standard-normal stream: identical seed, identical stream,
/// bit for bit within a build environment. (Box-Muller leans on libm's log,
/// cos and sin, so streams can differ by ulps across C libraries.)
class GaussianStream {
public:
    explicit GaussianStream(RngSeed seed) : state_(seed.value) {}

    std::uint64_t next_u64();
    double next_uniform();  // (0,1]
    double next();          // standard normal

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

Matrix gaussian_matrix(int rows, int cols, RngSeed seed);
std::vector<double> gaussian_vector(int n, RngSeed seed);

}  // namespace rsvd

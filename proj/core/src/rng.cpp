#include "rsvd/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rsvd {

std::uint64_t GaussianStream::next_u64() {
    // SplitMix64 (Steele, Lea, Flood).
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double GaussianStream::next_uniform() {
    // 53-bit mantissa, shifted into (0,1] so log() below never sees zero.
    return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double GaussianStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Matrix gaussian_matrix(int rows, int cols, RngSeed seed) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("gaussian_matrix: dimensions must be >= 1");
    Matrix m(rows, cols);
    GaussianStream g(seed);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = g.next();
    return m;
}

std::vector<double> gaussian_vector(int n, RngSeed seed) {
    if (n < 1) throw std::invalid_argument("gaussian_vector: length must be >= 1");
    std::vector<double> v(n);
    GaussianStream g(seed);
    for (double& x : v) x = g.next();
    return v;
}

}  // namespace rsvd

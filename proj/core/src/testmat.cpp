#include "rsvd/testmat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rsvd/qr.hpp"

namespace rsvd {

std::vector<double> decay_sigma(const DecaySpec& spec) {
    if (spec.model == DecaySpec::Model::custom) {
        if (spec.custom_sigma.empty()) {
            throw std::invalid_argument("decay_sigma: custom model needs values");
        }
        for (std::size_t i = 1; i < spec.custom_sigma.size(); ++i) {
            if (spec.custom_sigma[i] > spec.custom_sigma[i - 1]) {
                throw std::invalid_argument("decay_sigma: custom values must be nonincreasing");
            }
        }
        return spec.custom_sigma;
    }
    if (spec.n < 1) throw std::invalid_argument("decay_sigma: n >= 1");
    std::vector<double> s(spec.n);
    if (spec.model == DecaySpec::Model::exponential) {
        if (!(spec.rate > 0.0 && spec.rate < 1.0)) {
            throw std::invalid_argument("decay_sigma: exponential rate must lie in (0,1)");
        }
        double v = 1.0;
        for (int j = 0; j < spec.n; ++j) {
            s[j] = v;
            v *= spec.rate;
        }
    } else {
        if (spec.exponent <= 0.0) throw std::invalid_argument("decay_sigma: exponent > 0");
        for (int j = 0; j < spec.n; ++j) s[j] = std::pow(double(j + 1), -spec.exponent);
    }
    return s;
}

Matrix haar_orthogonal(int n, RngSeed seed) {
    QrFactors f = qr_factor(gaussian_matrix(n, n, seed));
    return std::move(f.q);
}

DecayMatrix decay_matrix(const DecaySpec& spec, RngSeed seed) {
    std::vector<double> sigma = decay_sigma(spec);
    const int n = int(sigma.size());
    const Matrix u = haar_orthogonal(n, seed.derive(0x5eed0001ULL));
    const Matrix v = haar_orthogonal(n, seed.derive(0x5eed0002ULL));
    DecayMatrix out;
    out.matrix = matmul(scale_columns(u, sigma), transpose(v));
    out.true_sigma = std::move(sigma);
    return out;
}

namespace {

struct Point {
    double x, y;
};

Matrix log_kernel(const std::vector<Point>& xs, const std::vector<Point>& ys) {
    Matrix a(int(xs.size()), int(ys.size()));
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const double dx = xs[i].x - ys[j].x;
            const double dy = xs[i].y - ys[j].y;
            a(i, j) = 0.5 * std::log(dx * dx + dy * dy);
        }
    }
    return a;
}

}  // namespace

Matrix log_kernel_gaussian(int n, double mu, RngSeed seed) {
    if (n < 2) throw std::invalid_argument("log_kernel_gaussian: n >= 2");
    GaussianStream g(seed);
    std::vector<Point> xs(n), ys(n);
    for (int i = 0; i < n; ++i) xs[i] = Point{g.next(), g.next()};
    for (int j = 0; j < n; ++j) ys[j] = Point{mu + g.next(), mu + g.next()};

    // Coincident points would put log(0) in the matrix; redraw the Y point.
    for (int j = 0; j < n; ++j) {
        bool clash = true;
        while (clash) {
            clash = false;
            for (int i = 0; i < n; ++i) {
                if (xs[i].x == ys[j].x && xs[i].y == ys[j].y) {
                    ys[j] = Point{mu + g.next(), mu + g.next()};
                    clash = true;
                    break;
                }
            }
        }
    }
    return log_kernel(xs, ys);
}

Matrix log_kernel_discs(int n) {
    if (n < 2) throw std::invalid_argument("log_kernel_discs: n >= 2");
    const double r1 = std::sqrt(2.0);
    const double r2 = 2.0 * std::sqrt(2.0);
    std::vector<Point> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * (i + 0.5) / n;
        xs[i] = Point{-1.0 + r1 * std::cos(t), -1.0 + r1 * std::sin(t)};
    }
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * std::numbers::pi * j / n;
        ys[j] = Point{2.0 + r2 * std::cos(t), 2.0 + r2 * std::sin(t)};
    }
    return log_kernel(xs, ys);
}

Matrix adversarial_hager(int n, double rho, RngSeed seed) {
    if (n < 3) throw std::invalid_argument("adversarial_hager: n >= 3");
    if (rho < 0.0) throw std::invalid_argument("adversarial_hager: rho >= 0");
    const int nm1 = n - 1;
    GaussianStream g(seed);
    auto uniform01 = [&g]() { return double(g.next_u64() >> 11) * 0x1.0p-53; };

    const double alpha = 1.0;
    std::vector<double> b(nm1);
    for (double& v : b) v = uniform01();
    Matrix ahat(nm1, nm1);
    for (std::size_t i = 0; i < ahat.size(); ++i) ahat.data()[i] = uniform01();

    // E = I - (1/(n-1)) 11^T annihilates the all-ones direction.
    Matrix e(nm1, nm1);
    for (int i = 0; i < nm1; ++i)
        for (int j = 0; j < nm1; ++j) e(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / nm1;
    const Matrix block = matmul(e, matmul(ahat, e));

    Matrix a(n, n);
    a(0, 0) = alpha;
    for (int i = 0; i < nm1; ++i) {
        a(0, i + 1) = b[i];
        a(i + 1, 0) = b[i];
        for (int j = 0; j < nm1; ++j) a(i + 1, j + 1) = rho * block(i, j);
    }
    return a;
}

Matrix identical_leading(int n, int k) {
    if (!(n >= k + 1 && k >= 1)) throw std::invalid_argument("identical_leading: need n >= k+1 >= 2");
    Matrix a(n, n);
    for (int j = 0; j <= k; ++j) a(j, j) = 1.0;
    double v = 0.5;
    for (int j = k + 1; j < n; ++j) {
        a(j, j) = v;
        v *= 0.5;
    }
    return a;
}

}  // namespace rsvd

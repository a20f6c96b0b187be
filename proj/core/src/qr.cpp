#include "rsvd/qr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsvd {

QrFactors qr_factor(const Matrix& y) {
    const int m = y.rows();
    const int n = y.cols();
    if (m < n) throw std::invalid_argument("qr_factor: requires rows >= cols");

    Matrix a = y;                       // reduced in place to R
    std::vector<std::vector<double>> vs;  // Householder vectors
    vs.reserve(n);

    for (int k = 0; k < n; ++k) {
        // Householder vector for column k, rows k..m-1.
        double norm = 0.0;
        for (int i = k; i < m; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);

        std::vector<double> v(m - k, 0.0);
        if (norm > 0.0) {
            const double alpha = a(k, k) >= 0.0 ? -norm : norm;
            for (int i = k; i < m; ++i) v[i - k] = a(i, k);
            v[0] -= alpha;
            double vnorm = 0.0;
            for (double t : v) vnorm += t * t;
            vnorm = std::sqrt(vnorm);
            if (vnorm > 0.0) {
                for (double& t : v) t /= vnorm;
                // Apply I - 2vv^T to the trailing block.
                for (int j = k; j < n; ++j) {
                    double s = 0.0;
                    for (int i = k; i < m; ++i) s += v[i - k] * a(i, j);
                    s *= 2.0;
                    for (int i = k; i < m; ++i) a(i, j) -= s * v[i - k];
                }
            }
            a(k, k) = alpha;
            for (int i = k + 1; i < m; ++i) a(i, k) = 0.0;
        }
        vs.push_back(std::move(v));
    }

    // Thin Q: apply reflectors in reverse to the first n columns of I.
    Matrix q(m, n);
    for (int j = 0; j < n; ++j) q(j, j) = 1.0;
    for (int k = n - 1; k >= 0; --k) {
        const std::vector<double>& v = vs[k];
        double vnorm = 0.0;
        for (double t : v) vnorm += t * t;
        if (vnorm == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[i - k] * q(i, j);
            s *= 2.0;
            for (int i = k; i < m; ++i) q(i, j) -= s * v[i - k];
        }
    }

    Matrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) r(i, j) = a(i, j);

    // Sign convention: R diagonal >= 0.
    for (int i = 0; i < n; ++i) {
        if (r(i, i) < 0.0) {
            for (int j = i; j < n; ++j) r(i, j) = -r(i, j);
            for (int row = 0; row < m; ++row) q(row, i) = -q(row, i);
        }
    }
    return QrFactors{std::move(q), std::move(r)};
}

double min_abs_r_diag(const QrFactors& f) {
    double best = std::abs(f.r(0, 0));
    for (int i = 1; i < f.r.rows(); ++i) best = std::min(best, std::abs(f.r(i, i)));
    return best;
}

}  // namespace rsvd

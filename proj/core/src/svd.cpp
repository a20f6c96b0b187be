#include "rsvd/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsvd {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-15;

// One-sided Jacobi on a tall matrix held column-major: rotate column pairs of
// W until they are mutually orthogonal, accumulating the rotations into V.
struct JacobiWork {
    int m, n;
    std::vector<double> w;  // m x n, column stride m
    std::vector<double> v;  // n x n, column stride n

    double* wcol(int j) { return w.data() + std::size_t(j) * m; }
    double* vcol(int j) { return v.data() + std::size_t(j) * n; }
};

void jacobi_sweeps(JacobiWork& jw) {
    const int m = jw.m;
    const int n = jw.n;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double* wi = jw.wcol(i);
                double* wj = jw.wcol(j);
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (int r = 0; r < m; ++r) {
                    aii += wi[r] * wi[r];
                    ajj += wj[r] * wj[r];
                    aij += wi[r] * wj[r];
                }
                if (aii == 0.0 || ajj == 0.0) continue;
                if (std::abs(aij) <= kOffDiagTol * std::sqrt(aii * ajj)) continue;

                rotated = true;
                const double zeta = (ajj - aii) / (2.0 * aij);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int r = 0; r < m; ++r) {
                    const double a = wi[r], b = wj[r];
                    wi[r] = cs * a - sn * b;
                    wj[r] = sn * a + cs * b;
                }
                double* vi = jw.vcol(i);
                double* vj = jw.vcol(j);
                for (int r = 0; r < n; ++r) {
                    const double a = vi[r], b = vj[r];
                    vi[r] = cs * a - sn * b;
                    vj[r] = sn * a + cs * b;
                }
            }
        }
        if (!rotated) return;
    }
    throw SvdConvergenceError(kMaxSweeps);
}

// Fill zero columns of U (exactly rank-deficient inputs) with unit vectors
// orthogonalized against everything already present.
void complete_basis(Matrix& u, int first_zero_col) {
    const int m = u.rows();
    int next_axis = 0;
    for (int j = first_zero_col; j < u.cols(); ++j) {
        while (next_axis < m) {
            std::vector<double> cand(m, 0.0);
            cand[next_axis++] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (int c = 0; c < j; ++c) {
                    double s = 0.0;
                    for (int r = 0; r < m; ++r) s += u(r, c) * cand[r];
                    for (int r = 0; r < m; ++r) cand[r] -= s * u(r, c);
                }
            }
            const double nrm = vec_norm2(cand);
            if (nrm > 0.5) {
                for (int r = 0; r < m; ++r) u(r, j) = cand[r] / nrm;
                break;
            }
        }
    }
}

SvdFactors jacobi_svd_tall(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();

    JacobiWork jw;
    jw.m = m;
    jw.n = n;
    jw.w.assign(std::size_t(m) * n, 0.0);
    jw.v.assign(std::size_t(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double* col = jw.wcol(j);
        for (int i = 0; i < m; ++i) col[i] = a(i, j);
        jw.vcol(j)[j] = 1.0;
    }

    jacobi_sweeps(jw);

    std::vector<double> sigma(n);
    for (int j = 0; j < n; ++j) {
        const double* col = jw.wcol(j);
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += col[i] * col[i];
        sigma[j] = std::sqrt(s);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return sigma[x] > sigma[y]; });

    SvdFactors f;
    f.sigma.resize(n);
    f.u = Matrix(m, n);
    f.v = Matrix(n, n);
    int first_zero = n;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        f.sigma[j] = sigma[src];
        const double* vcol = jw.vcol(src);
        for (int i = 0; i < n; ++i) f.v(i, j) = vcol[i];
        if (sigma[src] > 0.0) {
            const double* wcol = jw.wcol(src);
            for (int i = 0; i < m; ++i) f.u(i, j) = wcol[i] / sigma[src];
        } else if (first_zero == n) {
            first_zero = j;
        }
    }
    if (first_zero < n) complete_basis(f.u, first_zero);
    return f;
}

}  // namespace

SvdFactors exact_svd(const Matrix& a) {
    a.require_finite("exact_svd");
    if (a.rows() >= a.cols()) return jacobi_svd_tall(a);
    SvdFactors f = jacobi_svd_tall(transpose(a));
    return SvdFactors{std::move(f.v), std::move(f.sigma), std::move(f.u)};
}

SvdFactors truncate(const SvdFactors& f, int k) {
    if (k < 1 || k > int(f.sigma.size())) {
        throw std::invalid_argument("truncate: k out of range");
    }
    SvdFactors t;
    t.u = columns(f.u, 0, k);
    t.v = columns(f.v, 0, k);
    t.sigma.assign(f.sigma.begin(), f.sigma.begin() + k);
    return t;
}

SvdFactors truncated_svd(const Matrix& a, int k) {
    const int r = std::min(a.rows(), a.cols());
    if (k < 1 || k > r) throw std::invalid_argument("truncated_svd: k out of range");
    return truncate(exact_svd(a), k);
}

Matrix reconstruct(const SvdFactors& f) {
    return matmul(scale_columns(f.u, f.sigma), transpose(f.v));
}

MatrixNorms norms(const Matrix& a) {
    MatrixNorms out;
    out.one = one_norm(a);
    out.fro = fro_norm(a);
    out.max = max_abs(a);
    out.two = exact_svd(a).sigma.front();
    return out;
}

double two_norm(const Matrix& a) { return exact_svd(a).sigma.front(); }

double orthonormality_defect(const Matrix& q) {
    const Matrix g = matmul_at_b(q, q);
    double worst = 0.0;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
            worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

}  // namespace rsvd

#include "rsvd/normest.hpp"

#include <cmath>
#include <stdexcept>

#include "rsvd/qr.hpp"
#include "rsvd/svd.hpp"

namespace rsvd {

LinearOperator matrix_operator(const Matrix& a) {
    LinearOperator op;
    op.rows = a.rows();
    op.cols = a.cols();
    op.apply = [&a](const std::vector<double>& x) { return matvec(a, x); };
    op.apply_transpose = [&a](const std::vector<double>& y) { return matvec_transpose(a, y); };
    return op;
}

LinearOperator upper_triangular_inverse_operator(const Matrix& r) {
    if (r.rows() != r.cols()) {
        throw std::invalid_argument("upper_triangular_inverse_operator: square matrix required");
    }
    const int n = r.rows();
    for (int i = 0; i < n; ++i) {
        if (r(i, i) == 0.0) {
            throw std::invalid_argument("upper_triangular_inverse_operator: singular diagonal");
        }
    }
    LinearOperator op;
    op.rows = n;
    op.cols = n;
    op.apply = [&r, n](const std::vector<double>& b) {
        std::vector<double> x = b;  // back substitution, R x = b
        for (int i = n - 1; i >= 0; --i) {
            double s = x[i];
            for (int j = i + 1; j < n; ++j) s -= r(i, j) * x[j];
            x[i] = s / r(i, i);
        }
        return x;
    };
    op.apply_transpose = [&r, n](const std::vector<double>& b) {
        std::vector<double> x = b;  // forward substitution, R^T x = b
        for (int i = 0; i < n; ++i) {
            double s = x[i];
            for (int j = 0; j < i; ++j) s -= r(j, i) * x[j];
            x[i] = s / r(i, i);
        }
        return x;
    };
    return op;
}

double adjoint_mismatch(const LinearOperator& op, RngSeed seed, int probes) {
    double worst = 0.0;
    for (int t = 0; t < probes; ++t) {
        const std::vector<double> x = gaussian_vector(op.cols, seed.derive(2 * t));
        const std::vector<double> y = gaussian_vector(op.rows, seed.derive(2 * t + 1));
        const double lhs = vec_dot(op.apply(x), y);
        const double rhs = vec_dot(x, op.apply_transpose(y));
        worst = std::max(worst, std::abs(lhs - rhs) / (vec_norm2(x) * vec_norm2(y)));
    }
    return worst;
}

namespace {

double sign_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

NormEstimate hager_one_norm(const LinearOperator& op, std::vector<double> x0, int max_iter) {
    if (int(x0.size()) != op.cols) {
        throw std::invalid_argument("hager_one_norm: start vector length must equal cols");
    }
    if (max_iter < 1) throw std::invalid_argument("hager_one_norm: max_iter >= 1");
    const double n1 = vec_norm1(x0);
    if (n1 == 0.0) throw std::invalid_argument("hager_one_norm: zero start vector");
    vec_scale(x0, 1.0 / n1);

    NormEstimate est;
    est.start_vector_tag = StartVectorTag::custom;
    std::vector<double> x = std::move(x0);
    for (int it = 0; it < max_iter; ++it) {
        const std::vector<double> y = op.apply(x);
        est.matvec_count += 2;
        ++est.iterations;
        est.value = std::max(est.value, vec_norm1(y));

        std::vector<double> s(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) s[i] = sign_plus(y[i]);
        const std::vector<double> z = op.apply_transpose(s);

        if (vec_inf_norm(z) <= vec_dot(z, x)) break;

        int jbest = 0;
        double zbest = std::abs(z[0]);
        for (int j = 1; j < int(z.size()); ++j) {
            if (std::abs(z[j]) > zbest) {  // strict: lowest index wins ties
                zbest = std::abs(z[j]);
                jbest = j;
            }
        }
        x.assign(op.cols, 0.0);
        x[jbest] = 1.0;
    }
    return est;
}

namespace {

// Rank-1 randomized sketch (q = 0) done entirely through operator products;
// returns the approximate leading right singular vector.
std::vector<double> sketch_right_vector(const LinearOperator& op, int ell, RngSeed seed,
                                        long& matvec) {
    if (ell < 2) throw std::invalid_argument("randomized sketch: ell >= 2");
    if (ell > std::min(op.rows, op.cols)) {
        throw std::invalid_argument("randomized sketch: ell exceeds matrix dimensions");
    }
    Matrix y(op.rows, ell);
    for (int j = 0; j < ell; ++j) {
        const std::vector<double> w = gaussian_vector(op.cols, seed.derive(0xA110C000ULL + j));
        set_column(y, j, op.apply(w));
    }
    matvec += ell;
    const QrFactors qr = qr_factor(y);
    Matrix b(ell, op.cols);
    for (int j = 0; j < ell; ++j) {
        const std::vector<double> row = op.apply_transpose(get_column(qr.q, j));
        for (int c = 0; c < op.cols; ++c) b(j, c) = row[c];
    }
    matvec += ell;
    const SvdFactors bsvd = exact_svd(b);
    return get_column(bsvd.v, 0);
}

}  // namespace

NormEstimate randomized_hager(const LinearOperator& op, int ell, RngSeed seed,
                              int hager_iters) {
    long sketch_cost = 0;
    std::vector<double> u = sketch_right_vector(op, ell, seed, sketch_cost);
    NormEstimate est = hager_one_norm(op, std::move(u), hager_iters);
    est.matvec_count += sketch_cost;
    est.start_vector_tag = StartVectorTag::randomized;
    return est;
}

NormEstimate randomized_hager(const Matrix& a, int ell, RngSeed seed, int hager_iters) {
    return randomized_hager(matrix_operator(a), ell, seed, hager_iters);
}

OperatorPowerEstimate operator_power_method(const LinearOperator& op, int q, RngSeed seed) {
    std::vector<double> v = gaussian_vector(op.cols, seed);
    std::vector<double> u = op.apply(v);
    long matvec = 1;
    for (int it = 0; it < q; ++it) {
        const double nu = vec_norm2(u);
        if (nu == 0.0) return OperatorPowerEstimate{0.0, matvec};
        vec_scale(u, 1.0 / nu);
        v = op.apply_transpose(u);
        u = op.apply(v);
        matvec += 2;
    }
    const double nu = vec_norm2(u);
    if (nu == 0.0) return OperatorPowerEstimate{0.0, matvec};
    vec_scale(u, 1.0 / nu);
    const std::vector<double> row = op.apply_transpose(u);
    ++matvec;
    return OperatorPowerEstimate{vec_norm2(row), matvec};
}

ConditionEstimate condition_estimate(const LinearOperator& op, const LinearOperator& inv_op,
                                     int ell, RngSeed seed, int hager_iters, int power_q) {
    if (op.rows != op.cols || inv_op.rows != inv_op.cols || op.rows != inv_op.rows) {
        throw std::invalid_argument("condition_estimate: operators must be square, same size");
    }
    ConditionEstimate out;
    const NormEstimate h_fwd = randomized_hager(op, ell, seed.derive(1), hager_iters);
    const NormEstimate h_inv = randomized_hager(inv_op, ell, seed.derive(2), hager_iters);
    out.kappa1_est = h_fwd.value * h_inv.value;

    const OperatorPowerEstimate p_fwd = operator_power_method(op, power_q, seed.derive(3));
    const OperatorPowerEstimate p_inv = operator_power_method(inv_op, power_q, seed.derive(4));
    out.kappa2_est = p_fwd.norm_estimate * p_inv.norm_estimate;

    out.matvec_count =
        h_fwd.matvec_count + h_inv.matvec_count + p_fwd.matvec_count + p_inv.matvec_count;
    return out;
}

}  // namespace rsvd

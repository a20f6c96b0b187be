#include "rsvd/matrix.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace rsvd {

namespace {

void check_dims(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("Matrix: dimensions must be >= 1, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(std::size_t(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_dims(rows, cols);
    if (data_.size() != std::size_t(rows) * cols) {
        throw std::invalid_argument("Matrix: data length does not match dimensions");
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = int(rows.size());
    const int c = r > 0 ? int(rows.begin()->size()) : 0;
    Matrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        if (int(row.size()) != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

bool Matrix::is_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void Matrix::require_finite(const char* context) const {
    if (!is_finite()) {
        throw std::invalid_argument(std::string(context) + ": matrix has non-finite entries");
    }
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions " + std::to_string(a.cols()) +
                                    " and " + std::to_string(b.rows()) + " do not match");
    }
    Matrix c(a.rows(), b.cols());
    const int n = b.cols();
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("matmul_at_b: row counts do not match");
    }
    Matrix c(a.cols(), b.cols());
    const int n = b.cols();
    for (int k = 0; k < a.rows(); ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (int i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = c.row(i);
            for (int j = 0; j < n; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

namespace {

Matrix elementwise(const Matrix& a, const Matrix& b, double sign) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix add/sub: shape mismatch");
    }
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] + sign * b.data()[i];
    return c;
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) { return elementwise(a, b, 1.0); }
Matrix operator-(const Matrix& a, const Matrix& b) { return elementwise(a, b, -1.0); }

Matrix operator*(double s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = s * a.data()[i];
    return c;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (int(x.size()) != a.cols()) throw std::invalid_argument("matvec: length mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += arow[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec_transpose(const Matrix& a, const std::vector<double>& y) {
    if (int(y.size()) != a.rows()) throw std::invalid_argument("matvec_transpose: length mismatch");
    std::vector<double> x(a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        const double yi = y[i];
        if (yi == 0.0) continue;
        for (int j = 0; j < a.cols(); ++j) x[j] += arow[j] * yi;
    }
    return x;
}

double one_norm(const Matrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        if (s > best) best = s;
    }
    return best;
}

double inf_norm(const Matrix& a) {
    double best = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        if (s > best) best = s;
    }
    return best;
}

double fro_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
    return std::sqrt(s);
}

double max_abs(const Matrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a.data()[i]));
    return best;
}

Matrix columns(const Matrix& a, int first, int count) {
    if (first < 0 || count < 1 || first + count > a.cols()) {
        throw std::invalid_argument("columns: range out of bounds");
    }
    Matrix c(a.rows(), count);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < count; ++j) c(i, j) = a(i, first + j);
    return c;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row counts differ");
    Matrix c(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

Matrix diag_matrix(const std::vector<double>& d) {
    Matrix m(int(d.size()), int(d.size()));
    for (int i = 0; i < int(d.size()); ++i) m(i, i) = d[i];
    return m;
}

Matrix scale_columns(const Matrix& a, const std::vector<double>& s) {
    if (int(s.size()) != a.cols()) throw std::invalid_argument("scale_columns: length mismatch");
    Matrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * s[j];
    return c;
}

std::vector<double> get_column(const Matrix& a, int j) {
    std::vector<double> x(a.rows());
    for (int i = 0; i < a.rows(); ++i) x[i] = a(i, j);
    return x;
}

void set_column(Matrix& a, int j, const std::vector<double>& x) {
    if (int(x.size()) != a.rows()) throw std::invalid_argument("set_column: length mismatch");
    for (int i = 0; i < a.rows(); ++i) a(i, j) = x[i];
}

double vec_dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double vec_norm2(const std::vector<double>& x) { return std::sqrt(vec_dot(x, x)); }

double vec_norm1(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

double vec_inf_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

void vec_scale(std::vector<double>& x, double s) {
    for (double& v : x) v *= s;
}

}  // namespace rsvd

#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace rsvd {

/// Dense real matrix, row-major, double precision.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);
    Matrix(int rows, int cols, std::vector<double> data);

    static Matrix identity(int n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(int i) { return data_.data() + std::size_t(i) * cols_; }
    const double* row(int i) const { return data_.data() + std::size_t(i) * cols_; }

    bool is_finite() const;
    /// Throws std::invalid_argument when any entry is NaN or Inf.
    void require_finite(const char* context) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix transpose(const Matrix& a);

/// C = A * B. Throws on inner-dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);
/// C = A^T * B without forming A^T.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
std::vector<double> matvec_transpose(const Matrix& a, const std::vector<double>& y);

double one_norm(const Matrix& a);   // max column abs-sum
double inf_norm(const Matrix& a);   // max row abs-sum
double fro_norm(const Matrix& a);
double max_abs(const Matrix& a);

Matrix columns(const Matrix& a, int first, int count);
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix diag_matrix(const std::vector<double>& d);
/// A * diag(s); s.size() must equal a.cols().
Matrix scale_columns(const Matrix& a, const std::vector<double>& s);

std::vector<double> get_column(const Matrix& a, int j);
void set_column(Matrix& a, int j, const std::vector<double>& x);

double vec_dot(const std::vector<double>& x, const std::vector<double>& y);
double vec_norm2(const std::vector<double>& x);
double vec_norm1(const std::vector<double>& x);
double vec_inf_norm(const std::vector<double>& x);
void vec_scale(std::vector<double>& x, double s);

}  // namespace rsvd

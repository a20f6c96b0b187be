#pragma once

#include <string>
#include <vector>

#include "rsvd/matrix.hpp"

namespace rsvd {

// Two on-disk matrix formats:
//  - CSV: one row per line, comma-separated decimal floats.
//  - binary: magic "RSIM", little-endian u64 rows, u64 cols, then
//    rows*cols little-endian f64 in row-major order.

Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const Matrix& a, const std::string& path);

Matrix read_matrix_binary(const std::string& path);
void write_matrix_binary(const Matrix& a, const std::string& path);

/// Dispatch on extension: ".csv" is text, anything else is binary.
Matrix read_matrix(const std::string& path);
void write_matrix(const Matrix& a, const std::string& path);

/// One value per line, nonincreasing and nonnegative (validated on read).
std::vector<double> read_spectrum(const std::string& path);
void write_spectrum(const std::vector<double>& sigma, const std::string& path);

}  // namespace rsvd

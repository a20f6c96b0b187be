#include "rsvd/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rsvd {

namespace {

constexpr char kMagic[4] = {'R', 'S', 'I', 'M'};

void put_u64_le(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = (unsigned char)((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64_le(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("binary matrix: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
    return v;
}

void put_f64_le(std::ostream& os, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64_le(os, bits);
}

double get_f64_le(std::istream& is) {
    const std::uint64_t bits = get_u64_le(is);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
}

bool has_csv_extension(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": malformed CSV cell '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::runtime_error(path + ": ragged CSV rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) throw std::runtime_error(path + ": empty matrix");
    Matrix m(int(rows.size()), int(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    m.require_finite(path.c_str());
    return m;
}

void write_matrix_csv(const Matrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[40];
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            out << buf;
            if (j + 1 < a.cols()) out << ',';
        }
        out << '\n';
    }
}

Matrix read_matrix_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error(path + ": bad magic, not an RSIM matrix file");
    }
    const std::uint64_t rows = get_u64_le(in);
    const std::uint64_t cols = get_u64_le(in);
    if (rows < 1 || cols < 1 || rows * cols > (std::uint64_t(1) << 32)) {
        throw std::runtime_error(path + ": implausible dimensions");
    }
    Matrix m{int(rows), int(cols)};
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = get_f64_le(in);
    if (!in) throw std::runtime_error(path + ": truncated data");
    m.require_finite(path.c_str());
    return m;
}

void write_matrix_binary(const Matrix& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(kMagic, 4);
    put_u64_le(out, std::uint64_t(a.rows()));
    put_u64_le(out, std::uint64_t(a.cols()));
    for (std::size_t i = 0; i < a.size(); ++i) put_f64_le(out, a.data()[i]);
}

Matrix read_matrix(const std::string& path) {
    return has_csv_extension(path) ? read_matrix_csv(path) : read_matrix_binary(path);
}

void write_matrix(const Matrix& a, const std::string& path) {
    if (has_csv_extension(path)) {
        write_matrix_csv(a, path);
    } else {
        write_matrix_binary(a, path);
    }
}

std::vector<double> read_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> sigma;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        sigma.push_back(std::stod(line));
    }
    if (sigma.empty()) throw std::runtime_error(path + ": empty spectrum");
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] < 0.0) throw std::runtime_error(path + ": negative singular value");
        if (i > 0 && sigma[i] > sigma[i - 1]) {
            throw std::runtime_error(path + ": spectrum is not nonincreasing at line " +
                                     std::to_string(i + 1));
        }
    }
    return sigma;
}

void write_spectrum(const std::vector<double>& sigma, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[40];
    for (double s : sigma) {
        std::snprintf(buf, sizeof buf, "%.17g", s);
        out << buf << '\n';
    }
}

}  // namespace rsvd

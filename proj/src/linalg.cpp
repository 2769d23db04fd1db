#include "normreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace normreg {

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(n_cols, n_rows);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t j = 0; j < n_cols; ++j)
            t.at(j, i) = at(i, j);
    return t;
}

void ZeroPattern::normalize() {
    auto dedup = [](auto& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(rows);
    dedup(cols);
    dedup(entries);
}

std::vector<double> row_l2_norms(const DenseMatrix& a) {
    std::vector<double> norms(a.n_rows, 0.0);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        double s = 0.0;
        const double* row = a.data.data() + i * a.n_cols;
        for (std::size_t j = 0; j < a.n_cols; ++j) s += row[j] * row[j];
        norms[i] = std::sqrt(s);
    }
    return norms;
}

std::vector<double> col_l2_norms(const DenseMatrix& a) {
    std::vector<double> sq(a.n_cols, 0.0);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        const double* row = a.data.data() + i * a.n_cols;
        for (std::size_t j = 0; j < a.n_cols; ++j) sq[j] += row[j] * row[j];
    }
    for (double& s : sq) s = std::sqrt(s);
    return sq;
}

DenseMatrix apply_zero_pattern(const DenseMatrix& a, const ZeroPattern& z) {
    for (std::size_t r : z.rows)
        if (r >= a.n_rows) throw std::out_of_range("ZeroPattern row index out of bounds");
    for (std::size_t c : z.cols)
        if (c >= a.n_cols) throw std::out_of_range("ZeroPattern col index out of bounds");
    for (auto [r, c] : z.entries)
        if (r >= a.n_rows || c >= a.n_cols)
            throw std::out_of_range("ZeroPattern entry index out of bounds");

    DenseMatrix out = a;
    for (std::size_t r : z.rows)
        std::fill_n(out.data.begin() + static_cast<std::ptrdiff_t>(r * out.n_cols),
                    out.n_cols, 0.0);
    for (std::size_t c : z.cols)
        for (std::size_t i = 0; i < out.n_rows; ++i) out.at(i, c) = 0.0;
    for (auto [r, c] : z.entries) out.at(r, c) = 0.0;
    return out;
}

namespace {

// One fused sweep: z = A^T (A x) = sum_i (row_i . x) row_i, single pass
// over the matrix. Returns ||Ax||_2.
double gram_apply(const DenseMatrix& a, const std::vector<double>& x,
                  std::vector<double>& z) {
    std::fill(z.begin(), z.end(), 0.0);
    double sq = 0.0;
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        const double* row = a.data.data() + i * a.n_cols;
        double s = 0.0;
        for (std::size_t j = 0; j < a.n_cols; ++j) s += row[j] * x[j];
        sq += s * s;
        if (s != 0.0)
            for (std::size_t j = 0; j < a.n_cols; ++j) z[j] += s * row[j];
    }
    return std::sqrt(sq);
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

NormEstimate operator_norm(const DenseMatrix& a, const NormOptions& opts) {
    if (opts.tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be > 0");
    if (a.size() == 0) return {0.0, true, 0};

    NormEstimate best{0.0, true, 0};
    std::vector<double> x(a.n_cols), z(a.n_cols);
    for (int restart = 0; restart < opts.restarts; ++restart) {
        std::mt19937_64 eng(opts.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(restart + 1));
        for (double& xi : x)
            xi = static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53 - 0.5;
        double xn = norm2(x);
        for (double& xi : x) xi /= xn;

        double sigma_prev = -1.0;
        double sigma = 0.0;
        bool converged = false;
        int iters = 0;
        for (; iters < opts.max_iters; ++iters) {
            sigma = gram_apply(a, x, z);
            if (sigma == 0.0) { converged = true; break; }  // x in the kernel of A
            if (sigma_prev >= 0.0 &&
                std::abs(sigma - sigma_prev) <= opts.tol * sigma) {
                converged = true;
                ++iters;
                break;
            }
            sigma_prev = sigma;
            double zn = norm2(z);
            if (zn == 0.0) { converged = true; break; }
            for (std::size_t j = 0; j < a.n_cols; ++j) x[j] = z[j] / zn;
        }
        if (sigma > best.value) best.value = sigma;
        best.iterations += iters;
        if (!converged) best.converged = false;
    }
    return best;
}

double operator_norm_oracle(const DenseMatrix& a) {
    const std::size_t n = a.n_cols;
    if (std::max(a.n_rows, a.n_cols) > 64)
        throw std::invalid_argument("operator_norm_oracle: dimension exceeds 64");
    if (a.size() == 0) return 0.0;

    // B = A^T A, symmetric n x n
    std::vector<double> b(n * n, 0.0);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        const double* row = a.data.data() + i * a.n_cols;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                b[p * n + q] += row[p] * row[q];
    }

    double bfro = 0.0;
    for (double v : b) bfro += v * v;
    const double off_target = 1e-12 * std::max(1.0, bfro);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * b[p * n + q] * b[p * n + q];
        if (off < off_target) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = b[p * n + q];
                if (apq == 0.0) continue;
                double app = b[p * n + p];
                double aqq = b[q * n + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double bkp = b[k * n + p];
                    double bkq = b[k * n + q];
                    b[k * n + p] = c * bkp - s * bkq;
                    b[k * n + q] = s * bkp + c * bkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double bpk = b[p * n + k];
                    double bqk = b[q * n + k];
                    b[p * n + k] = c * bpk - s * bqk;
                    b[q * n + k] = s * bpk + c * bqk;
                }
            }
        }
    }

    double lam = 0.0;
    for (std::size_t p = 0; p < n; ++p) lam = std::max(lam, b[p * n + p]);
    return std::sqrt(std::max(0.0, lam));
}

BilinearBound bilinear_bound_check(const DenseMatrix& q,
                                   std::span<const double> u,
                                   std::span<const double> v) {
    if (u.size() != q.n_rows || v.size() != q.n_cols)
        throw std::invalid_argument("bilinear_bound_check: vector size mismatch");
    auto unit = [](std::span<const double> w) {
        double s = 0.0;
        for (double x : w) s += x * x;
        return std::abs(std::sqrt(s) - 1.0) <= 1e-12;
    };
    if (!unit(u) || !unit(v))
        throw std::invalid_argument("bilinear_bound_check: u and v must be unit vectors");

    BilinearBound res;
    std::size_t max_row_nnz = 0;
    std::vector<double> colsq(q.n_cols, 0.0);
    for (std::size_t i = 0; i < q.n_rows; ++i) {
        const double* row = q.data.data() + i * q.n_cols;
        double s = 0.0;
        std::size_t nnz = 0;
        for (std::size_t j = 0; j < q.n_cols; ++j) {
            s += row[j] * v[j];
            if (row[j] != 0.0) {
                ++nnz;
                colsq[j] += row[j] * row[j];
            }
        }
        res.lhs += u[i] * s;
        max_row_nnz = std::max(max_row_nnz, nnz);
    }
    double max_col = 0.0;
    for (double s : colsq) max_col = std::max(max_col, std::sqrt(s));
    res.rhs = max_col * std::sqrt(static_cast<double>(max_row_nnz));
    res.holds = res.lhs <= res.rhs + 1e-9;
    return res;
}

void write_matrix_binary(const DenseMatrix& a, std::ostream& out) {
    std::uint64_t dims[2] = {a.n_rows, a.n_cols};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(a.data.data()),
              static_cast<std::streamsize>(a.data.size() * sizeof(double)));
}

DenseMatrix read_matrix_binary(std::istream& in) {
    std::uint64_t dims[2];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in) throw std::runtime_error("matrix binary: truncated header");
    DenseMatrix a(dims[0], dims[1]);
    in.read(reinterpret_cast<char*>(a.data.data()),
            static_cast<std::streamsize>(a.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("matrix binary: truncated data");
    return a;
}

void write_matrix_binary_file(const DenseMatrix& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_matrix_binary(a, out);
}

DenseMatrix read_matrix_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_matrix_binary(in);
}

void write_matrix_csv(const DenseMatrix& a, std::ostream& out) {
    out.precision(17);
    for (std::size_t i = 0; i < a.n_rows; ++i) {
        for (std::size_t j = 0; j < a.n_cols; ++j) {
            if (j) out << ',';
            out << a.at(i, j);
        }
        out << '\n';
    }
}

DenseMatrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return {};
    DenseMatrix a(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != a.n_cols)
            throw std::runtime_error("matrix csv: ragged rows");
        std::copy(rows[i].begin(), rows[i].end(),
                  a.data.begin() + static_cast<std::ptrdiff_t>(i * a.n_cols));
    }
    return a;
}

}  // namespace normreg

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace normreg {

/// Dense row-major matrix of 64-bit reals.
struct DenseMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> data;  // row-major, n_rows * n_cols

    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : n_rows(rows), n_cols(cols), data(rows * cols, fill) {}

    double& at(std::size_t i, std::size_t j) { return data[i * n_cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * n_cols + j]; }

    std::size_t size() const { return data.size(); }
    bool square() const { return n_rows == n_cols; }

    DenseMatrix transposed() const;
};

/// Index sets describing which rows, columns and individual entries to zero.
/// Normalized form: sorted, deduplicated.
struct ZeroPattern {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::vector<std::pair<std::size_t, std::size_t>> entries;

    void normalize();
    bool empty() const { return rows.empty() && cols.empty() && entries.empty(); }
};

std::vector<double> row_l2_norms(const DenseMatrix& a);
std::vector<double> col_l2_norms(const DenseMatrix& a);

/// Returns a copy of `a` with the pattern zeroed; `a` is unchanged.
/// Throws std::out_of_range on out-of-bounds indices.
DenseMatrix apply_zero_pattern(const DenseMatrix& a, const ZeroPattern& z);

struct NormOptions {
    double tol = 1e-8;
    int max_iters = 10000;
    int restarts = 3;
    std::uint64_t seed = 0x243f6a8885a308d3ull;  // start-vector seed base
};

struct NormEstimate {
    double value = 0.0;
    bool converged = true;
    int iterations = 0;
};

/// Largest singular value via power iteration on x -> A^T(Ax), several
/// seeded restarts, max over restarts. A non-converged run is flagged in
/// the result rather than reported silently.
NormEstimate operator_norm(const DenseMatrix& a, const NormOptions& opts = {});

/// Independent desk-scale oracle: sqrt(largest eigenvalue of A^T A) by
/// cyclic Jacobi rotations. Requires min dimension constraint n <= 64.
double operator_norm_oracle(const DenseMatrix& a);

struct BilinearBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Deterministic bound sum_ij Q_ij u_i v_j <= max_j ||col_j(Q)|| * sqrt(max_i e_i^row(Q)).
/// u, v must be unit vectors within 1e-12.
BilinearBound bilinear_bound_check(const DenseMatrix& q,
                                   std::span<const double> u,
                                   std::span<const double> v);

// Binary format: two little-endian u64 dims, then row-major f64 entries.
void write_matrix_binary(const DenseMatrix& a, std::ostream& out);
DenseMatrix read_matrix_binary(std::istream& in);
void write_matrix_binary_file(const DenseMatrix& a, const std::string& path);
DenseMatrix read_matrix_binary_file(const std::string& path);

void write_matrix_csv(const DenseMatrix& a, std::ostream& out);
DenseMatrix read_matrix_csv(std::istream& in);

}  // namespace normreg

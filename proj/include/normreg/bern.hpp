#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "normreg/dist.hpp"
#include "normreg/linalg.hpp"
#include "normreg/trim.hpp"

namespace normreg {

/// Coordinate-list sparse 0-1 (or signed +-1/sqrt(p)) pattern.
struct SparsePattern {
    std::size_t n = 0;
    double p = 0.0;  // nominal density
    bool is_signed = false;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::vector<double> values;  // 1.0 for unsigned, +-1/sqrt(p) for signed

    std::size_t nnz() const { return rows.size(); }
};

/// Each position included independently with probability p (geometric gap
/// sampling); signed entries carry an independent symmetric sign.
SparsePattern sample_bernoulli(std::size_t n, double p, bool make_signed, RngStream& rng);

std::vector<std::size_t> row_degrees(const SparsePattern& b);
std::vector<std::size_t> col_degrees(const SparsePattern& b);

/// Remove every row and column whose degree on the input exceeds threshold.
std::pair<SparsePattern, RegularizationReport>
degree_trim(const SparsePattern& b, double threshold, const NormOptions& nopts = {});

struct WeightCut {
    std::vector<std::size_t> J;    // columns with V_j < 0.1
    std::vector<double> log_V;     // per-column log product, <= 0
};

/// Per-column weight product cut: V_j = (Lnp/e_j)^(e_j) when e_j > Lnp,
/// else 1; J = {j : V_j < 0.1}. L < 10 is allowed but warned about.
WeightCut weight_column_cut(const SparsePattern& b, double p, double L);

struct DiscrepancyResult {
    bool all_pairs_ok = false;
    std::uint32_t worst_S = 0;  // bitmask of worst pair
    std::uint32_t worst_T = 0;
    double worst_e = 0.0;
    double worst_margin = 0.0;  // max slack of (A)/(B) at the worst pair
};

/// Exhaustive check over all nonempty S, T subsets of [n]: every pair must
/// satisfy (A) e(S,T) <= C1|S||T|p or (B) e * ln(e/(|S||T|p)) <= C2|T|ln(n/|T|).
/// Requires n <= 12.
DiscrepancyResult discrepancy_check(const SparsePattern& b, double p,
                                    double C1, double C2);

/// Lexicographically minimal (C1, C2) under which every pair passes.
std::pair<double, double> discrepancy_min_constants(const SparsePattern& b, double p);

NormEstimate sparse_operator_norm(const SparsePattern& b, const NormOptions& opts = {});

DenseMatrix densify(const SparsePattern& b);

// Text format: header "n p signed", then one "row col value" line per nonzero.
void write_pattern(const SparsePattern& b, std::ostream& out);
SparsePattern read_pattern(std::istream& in);

}  // namespace normreg

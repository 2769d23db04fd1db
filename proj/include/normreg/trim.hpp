#pragma once

#include <optional>
#include <string>
#include <utility>

#include "normreg/linalg.hpp"

namespace normreg {

/// What a regularizer did: the zeroed pattern, norms before/after and the
/// derived constants.
struct RegularizationReport {
    ZeroPattern pattern;
    double norm_before = 0.0;
    double norm_after = 0.0;
    bool norm_before_converged = true;
    bool norm_after_converged = true;
    std::optional<double> epsilon;
    std::optional<double> c_eps;
    std::optional<double> threshold_used;
    std::size_t entries_changed = 0;
    std::size_t rows_touched = 0;  // distinct rows containing a changed entry
    std::size_t cols_touched = 0;

    std::string to_json() const;
};

/// c_eps = ln(1/epsilon)/epsilon. Throws outside (0, 1).
double c_epsilon(double epsilon);

/// Zero the k = ceil(eps*n) rows and k columns of largest L2 norm, both
/// measured on the original matrix. Ties: smaller index first.
std::pair<DenseMatrix, RegularizationReport>
trim_topk_rows_cols(const DenseMatrix& a, double epsilon, const NormOptions& nopts = {});

/// Zero every row and column whose original L2 norm exceeds the threshold.
std::pair<DenseMatrix, RegularizationReport>
trim_threshold_rows_cols(const DenseMatrix& a, double threshold, const NormOptions& nopts = {});

/// Entry-truncation baseline: zero every entry with |a_ij| > level.
std::pair<DenseMatrix, RegularizationReport>
truncate_entries(const DenseMatrix& a, double level, const NormOptions& nopts = {});

/// Fills the changed-entry statistics of a report by diffing two matrices.
void fill_change_stats(const DenseMatrix& before, const DenseMatrix& after,
                       RegularizationReport& report);

}  // namespace normreg

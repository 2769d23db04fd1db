#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "normreg/levels.hpp"
#include "normreg/linalg.hpp"

namespace normreg {

struct Algo1Report {
    double epsilon = 0.0;
    double c_eps = 0.0;
    int l_max = 0;
    std::vector<std::size_t> step1_entries;  // flat positions actually zeroed
    std::vector<std::vector<std::size_t>> J_l_sets;
    std::vector<std::vector<std::size_t>> I_l_sets;
    std::vector<std::size_t> J_hat;  // floor(n eps / 4) largest-L2 columns
    std::vector<std::size_t> I_hat;
    std::vector<std::size_t> J;      // (union J_l) union J_hat, sorted
    std::vector<std::size_t> I;

    struct LevelDiag {
        double threshold = 0.0;          // t_l = c_eps * n * p_l
        std::size_t over_threshold = 0;  // columns (rows) with count > t_l
    };
    std::vector<LevelDiag> col_diags;
    std::vector<LevelDiag> row_diags;

    double norm_before = 0.0;
    double norm_after = 0.0;
    bool norm_before_converged = true;
    bool norm_after_converged = true;

    std::string to_json() const;
};

/// Count per column of level positions: entry j = |{i: (i,j) in level}|.
std::vector<std::size_t> level_column_counts(const DenseMatrix& a,
                                             std::span<const std::size_t> level);

/// log V_j = count * ln(min(1, t/count)); the weight product has exactly
/// `count` non-unit factors t/count when count > t. Computed in log space
/// since (t/e)^e underflows for large e.
double column_log_weight(std::size_t count, double t);

/// Full five-step pipeline. Requires 0 < eps <= 1/6 and ln n >= ln eps^-4.
std::pair<DenseMatrix, Algo1Report>
run_algorithm1(const DenseMatrix& a, double epsilon,
               std::optional<double> c_eps_override = std::nullopt,
               const NormOptions& nopts = {});

/// Row/column footprint of the entries where `before` and `after` differ.
struct Footprint {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t entries = 0;
};
Footprint changed_footprint(const DenseMatrix& before, const DenseMatrix& after);

}  // namespace normreg

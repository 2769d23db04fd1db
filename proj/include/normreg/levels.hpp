#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "normreg/dist.hpp"
#include "normreg/linalg.hpp"

namespace normreg {

/// Dyadic level sets of the entry order statistics. Positions are flat
/// row-major indices i*n_cols + j. Ranks are 1-based; level l holds the
/// ranks ceil(2^(l-1) n eps) + 1 .. ceil(2^l n eps), clamped to n^2.
struct LevelDecomposition {
    std::size_t n = 0;
    double epsilon = 0.0;
    int l_max = 0;
    /// Permutation of all n^2 positions, non-increasing |entry|; ties by
    /// row-major position.
    std::vector<std::size_t> ranking;
    /// 1-based inclusive rank ranges per level; lo > hi means empty.
    std::vector<std::pair<std::size_t, std::size_t>> level_ranges;
    std::vector<double> p_levels;        // p_l = 2^l eps / n
    std::size_t step1_count = 0;         // ceil(n eps / 2), clamped to n^2

    std::span<const std::size_t> step1_positions() const {
        return {ranking.data(), step1_count};
    }
    std::span<const std::size_t> level_positions(int l) const {
        auto [lo, hi] = level_ranges.at(static_cast<std::size_t>(l));
        if (lo > hi) return {};
        return {ranking.data() + (lo - 1), hi - lo + 1};
    }

    std::string to_json() const;  // rank ranges only, not the permutation
};

/// l_max = floor(log2(ln n / ln eps^-4)). Throws when ln n < ln eps^-4
/// (matrix too small for this eps).
int default_l_max(std::size_t n, double epsilon);

LevelDecomposition build_levels(const DenseMatrix& a, double epsilon,
                                std::optional<int> l_max_override = std::nullopt);

struct QuantileEstimate {
    int k = 0;
    double order_statistic_sq = 0.0;
    std::optional<double> lower_ref;  // closed-form q_{k-2} when available
    std::optional<double> upper_ref;  // closed-form q_k
};

/// Squared order statistic at rank ceil(n^2 * 2^(1-k)) of the non-increasing
/// |entry| ranking. Throws when the rank falls outside [1, n^2].
QuantileEstimate estimate_quantile(const DenseMatrix& a, int k);

/// Same, with closed-form quantile references filled for distributions that
/// admit them (symmetric Pareto).
QuantileEstimate estimate_quantile(const DenseMatrix& a, int k,
                                   const DistributionSpec& spec);

}  // namespace normreg

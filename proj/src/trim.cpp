#include "normreg/trim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace normreg {

double c_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("c_epsilon: epsilon must be in (0, 1)");
    return std::log(1.0 / epsilon) / epsilon;
}

void fill_change_stats(const DenseMatrix& before, const DenseMatrix& after,
                       RegularizationReport& report) {
    std::vector<char> row_hit(before.n_rows, 0), col_hit(before.n_cols, 0);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < before.n_rows; ++i) {
        for (std::size_t j = 0; j < before.n_cols; ++j) {
            if (before.at(i, j) != after.at(i, j)) {
                ++changed;
                row_hit[i] = 1;
                col_hit[j] = 1;
            }
        }
    }
    report.entries_changed = changed;
    report.rows_touched = static_cast<std::size_t>(
        std::count(row_hit.begin(), row_hit.end(), 1));
    report.cols_touched = static_cast<std::size_t>(
        std::count(col_hit.begin(), col_hit.end(), 1));
}

namespace {

// Indices of the k largest values, ties broken by smaller index.
std::vector<std::size_t> top_k_indices(const std::vector<double>& values, std::size_t k) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (values[a] != values[b]) return values[a] > values[b];
                          return a < b;
                      });
    idx.resize(k);
    return idx;
}

std::pair<DenseMatrix, RegularizationReport>
finalize(const DenseMatrix& a, const ZeroPattern& pattern,
         RegularizationReport report, const NormOptions& nopts) {
    report.pattern = pattern;
    report.pattern.normalize();
    DenseMatrix out = apply_zero_pattern(a, report.pattern);
    auto before = operator_norm(a, nopts);
    auto after = operator_norm(out, nopts);
    report.norm_before = before.value;
    report.norm_after = after.value;
    report.norm_before_converged = before.converged;
    report.norm_after_converged = after.converged;
    fill_change_stats(a, out, report);
    return {std::move(out), std::move(report)};
}

}  // namespace

std::pair<DenseMatrix, RegularizationReport>
trim_topk_rows_cols(const DenseMatrix& a, double epsilon, const NormOptions& nopts) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("trim_topk_rows_cols: epsilon must be in (0, 1]");
    if (a.n_rows < 1 || a.n_cols < 1)
        throw std::invalid_argument("trim_topk_rows_cols: empty matrix");

    const auto n = a.n_rows;
    const auto k = static_cast<std::size_t>(
        std::ceil(epsilon * static_cast<double>(n)));

    ZeroPattern z;
    z.rows = top_k_indices(row_l2_norms(a), k);
    z.cols = top_k_indices(col_l2_norms(a), k);

    RegularizationReport report;
    report.epsilon = epsilon;
    if (epsilon < 1.0) report.c_eps = c_epsilon(epsilon);
    return finalize(a, z, std::move(report), nopts);
}

std::pair<DenseMatrix, RegularizationReport>
trim_threshold_rows_cols(const DenseMatrix& a, double threshold, const NormOptions& nopts) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("trim_threshold_rows_cols: threshold must be > 0");

    ZeroPattern z;
    auto rnorms = row_l2_norms(a);
    auto cnorms = col_l2_norms(a);
    for (std::size_t i = 0; i < rnorms.size(); ++i)
        if (rnorms[i] > threshold) z.rows.push_back(i);
    for (std::size_t j = 0; j < cnorms.size(); ++j)
        if (cnorms[j] > threshold) z.cols.push_back(j);

    RegularizationReport report;
    report.threshold_used = threshold;
    return finalize(a, z, std::move(report), nopts);
}

std::pair<DenseMatrix, RegularizationReport>
truncate_entries(const DenseMatrix& a, double level, const NormOptions& nopts) {
    if (!(level > 0.0))
        throw std::invalid_argument("truncate_entries: level must be > 0");

    ZeroPattern z;
    for (std::size_t i = 0; i < a.n_rows; ++i)
        for (std::size_t j = 0; j < a.n_cols; ++j)
            if (std::abs(a.at(i, j)) > level) z.entries.emplace_back(i, j);

    RegularizationReport report;
    report.threshold_used = level;
    return finalize(a, z, std::move(report), nopts);
}

std::string RegularizationReport::to_json() const {
    nlohmann::json j;
    j["rows"] = pattern.rows;
    j["cols"] = pattern.cols;
    {
        nlohmann::json entries = nlohmann::json::array();
        for (auto [r, c] : pattern.entries) entries.push_back({r, c});
        j["entries"] = std::move(entries);
    }
    j["norm_before"] = norm_before;
    j["norm_after"] = norm_after;
    j["norm_before_converged"] = norm_before_converged;
    j["norm_after_converged"] = norm_after_converged;
    if (epsilon) j["epsilon"] = *epsilon;
    if (c_eps) j["c_epsilon"] = *c_eps;
    if (threshold_used) j["threshold_used"] = *threshold_used;
    j["entries_changed"] = entries_changed;
    j["rows_touched"] = rows_touched;
    j["cols_touched"] = cols_touched;
    return j.dump(2);
}

}  // namespace normreg

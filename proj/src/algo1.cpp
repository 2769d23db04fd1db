#include "normreg/algo1.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "normreg/trim.hpp"

namespace normreg {

std::vector<std::size_t> level_column_counts(const DenseMatrix& a,
                                             std::span<const std::size_t> level) {
    std::vector<std::size_t> counts(a.n_cols, 0);
    for (std::size_t pos : level) {
        if (pos >= a.size())
            throw std::out_of_range("level_column_counts: position out of bounds");
        ++counts[pos % a.n_cols];
    }
    return counts;
}

double column_log_weight(std::size_t count, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("column_log_weight: t must be > 0");
    if (count == 0) return 0.0;
    double c = static_cast<double>(count);
    if (c <= t) return 0.0;
    return c * std::log(t / c);
}

namespace {

constexpr double kLogCutoff = -2.302585092994045684;  // ln 0.1

std::vector<std::size_t> level_row_counts(const DenseMatrix& a,
                                          std::span<const std::size_t> level) {
    std::vector<std::size_t> counts(a.n_rows, 0);
    for (std::size_t pos : level) ++counts[pos / a.n_cols];
    return counts;
}

std::vector<std::size_t> top_k_by_norm(const std::vector<double>& norms, std::size_t k) {
    std::vector<std::size_t> idx(norms.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t x, std::size_t y) {
                          if (norms[x] != norms[y]) return norms[x] > norms[y];
                          return x < y;
                      });
    idx.resize(k);
    return idx;
}

std::vector<std::size_t> sorted_union(const std::vector<std::vector<std::size_t>>& level_sets,
                                      const std::vector<std::size_t>& hat) {
    std::vector<std::size_t> all = hat;
    for (const auto& s : level_sets) all.insert(all.end(), s.begin(), s.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

}  // namespace

std::pair<DenseMatrix, Algo1Report>
run_algorithm1(const DenseMatrix& a, double epsilon,
               std::optional<double> c_eps_override, const NormOptions& nopts) {
    if (!(epsilon > 0.0 && epsilon <= 1.0 / 6.0))
        throw std::invalid_argument("run_algorithm1: epsilon must be in (0, 1/6]");
    if (!a.square()) throw std::invalid_argument("run_algorithm1: matrix must be square");

    const std::size_t n = a.n_rows;
    Algo1Report rep;
    rep.epsilon = epsilon;
    rep.c_eps = c_eps_override ? *c_eps_override : c_epsilon(epsilon);

    // Ranking and levels are built once on the original matrix; Step 1
    // carves out the top ranks and the levels follow from the same order.
    LevelDecomposition dec = build_levels(a, epsilon);
    rep.l_max = dec.l_max;

    // Step 1: zero the ceil(n eps / 2) largest-|.| entries.
    DenseMatrix out = a;
    for (std::size_t pos : dec.step1_positions()) {
        rep.step1_entries.push_back(pos);
        out.data[pos] = 0.0;
    }

    // Steps 2-3 for the columns, then the same on transposed index roles.
    for (int l = 0; l <= dec.l_max; ++l) {
        const double t_l = rep.c_eps * static_cast<double>(n) * dec.p_levels[static_cast<std::size_t>(l)];
        auto level = dec.level_positions(l);

        auto ccounts = level_column_counts(a, level);
        std::vector<std::size_t> Jl;
        std::size_t over_c = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (static_cast<double>(ccounts[j]) > t_l) ++over_c;
            if (column_log_weight(ccounts[j], t_l) <= kLogCutoff) Jl.push_back(j);
        }
        rep.col_diags.push_back({t_l, over_c});
        rep.J_l_sets.push_back(std::move(Jl));

        auto rcounts = level_row_counts(a, level);
        std::vector<std::size_t> Il;
        std::size_t over_r = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<double>(rcounts[i]) > t_l) ++over_r;
            if (column_log_weight(rcounts[i], t_l) <= kLogCutoff) Il.push_back(i);
        }
        rep.row_diags.push_back({t_l, over_r});
        rep.I_l_sets.push_back(std::move(Il));
    }

    const auto hat_k = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * epsilon / 4.0));
    rep.J_hat = top_k_by_norm(col_l2_norms(a), hat_k);
    rep.I_hat = top_k_by_norm(row_l2_norms(a), hat_k);

    rep.J = sorted_union(rep.J_l_sets, rep.J_hat);
    rep.I = sorted_union(rep.I_l_sets, rep.I_hat);

    // Step 5: zero the product subset I x J.
    for (std::size_t i : rep.I)
        for (std::size_t j : rep.J) out.at(i, j) = 0.0;

    auto before = operator_norm(a, nopts);
    auto after = operator_norm(out, nopts);
    rep.norm_before = before.value;
    rep.norm_after = after.value;
    rep.norm_before_converged = before.converged;
    rep.norm_after_converged = after.converged;
    return {std::move(out), std::move(rep)};
}

Footprint changed_footprint(const DenseMatrix& before, const DenseMatrix& after) {
    Footprint fp;
    std::vector<char> row_hit(before.n_rows, 0), col_hit(before.n_cols, 0);
    for (std::size_t i = 0; i < before.n_rows; ++i)
        for (std::size_t j = 0; j < before.n_cols; ++j)
            if (before.at(i, j) != after.at(i, j)) {
                ++fp.entries;
                row_hit[i] = 1;
                col_hit[j] = 1;
            }
    fp.rows = static_cast<std::size_t>(std::count(row_hit.begin(), row_hit.end(), 1));
    fp.cols = static_cast<std::size_t>(std::count(col_hit.begin(), col_hit.end(), 1));
    return fp;
}

std::string Algo1Report::to_json() const {
    nlohmann::json j;
    j["epsilon"] = epsilon;
    j["c_epsilon"] = c_eps;
    j["l_max"] = l_max;
    j["step1_entries"] = step1_entries;
    j["J_l_sets"] = J_l_sets;
    j["I_l_sets"] = I_l_sets;
    j["J_hat"] = J_hat;
    j["I_hat"] = I_hat;
    j["J"] = J;
    j["I"] = I;
    auto diag_json = [](const std::vector<LevelDiag>& diags) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& d : diags)
            arr.push_back({{"threshold", d.threshold},
                           {"over_threshold", d.over_threshold}});
        return arr;
    };
    j["col_diags"] = diag_json(col_diags);
    j["row_diags"] = diag_json(row_diags);
    j["norm_before"] = norm_before;
    j["norm_after"] = norm_after;
    j["norm_before_converged"] = norm_before_converged;
    j["norm_after_converged"] = norm_after_converged;
    return j.dump(2);
}

}  // namespace normreg

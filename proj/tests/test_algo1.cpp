#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "normreg/algo1.hpp"
#include "normreg/dist.hpp"
#include "normreg/trim.hpp"

using namespace normreg;

namespace {

const NormOptions kFastNorm{.tol = 1e-5, .max_iters = 3000, .restarts = 2};

DenseMatrix sample(DistKind kind, std::size_t n, std::uint64_t seed, double alpha = 2.5) {
    DistributionSpec spec{kind, 0.5, alpha, true};
    RngStream rng(derive_seed(seed, 0, "algo1-test"));
    return sample_matrix(spec, n, rng);
}

}  // namespace

TEST_CASE("level_column_counts") {
    DenseMatrix a(5, 5);
    CHECK(level_column_counts(a, {}) == std::vector<std::size_t>(5, 0));

    std::vector<std::size_t> full_col;
    for (std::size_t i = 0; i < 5; ++i) full_col.push_back(i * 5 + 2);
    auto counts = level_column_counts(a, full_col);
    CHECK(counts[2] == 5);
    CHECK(counts[0] == 0);

    // {(0,1), (2,1), (3,4)}
    std::vector<std::size_t> level = {0 * 5 + 1, 2 * 5 + 1, 3 * 5 + 4};
    counts = level_column_counts(a, level);
    CHECK(counts[1] == 2);
    CHECK(counts[4] == 1);
    CHECK(counts[0] + counts[2] + counts[3] == 0);

    std::vector<std::size_t> bad = {99};
    CHECK_THROWS_AS(level_column_counts(a, bad), std::out_of_range);
}

TEST_CASE("column_log_weight") {
    const double ln01 = std::log(0.1);
    CHECK(column_log_weight(0, 2.0) == 0.0);
    CHECK(column_log_weight(2, 2.0) == 0.0);  // count <= t: all weights 1
    CHECK(column_log_weight(4, 2.0) == doctest::Approx(std::log(0.0625)));
    CHECK(column_log_weight(4, 2.0) <= ln01);       // 0.0625 <= 0.1: selected
    CHECK(column_log_weight(3, 2.0) == doctest::Approx(std::log(8.0 / 27.0)));
    CHECK(column_log_weight(3, 2.0) > ln01);        // 0.296 > 0.1: not selected
    CHECK_THROWS_AS(column_log_weight(1, 0.0), std::invalid_argument);
}

TEST_CASE("preconditions") {
    auto a = sample(DistKind::gaussian, 8, 1);
    CHECK_THROWS_AS(run_algorithm1(a, 0.3), std::invalid_argument);   // eps > 1/6
    CHECK_THROWS_AS(run_algorithm1(a, 1.0 / 6.0), std::invalid_argument);  // n too small
}

TEST_CASE("identity-like input: no heavy columns, J reduces to J_hat") {
    const std::size_t n = 1296;
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a.at(i, i) = 1.0;
    auto [out, rep] = run_algorithm1(a, 1.0 / 6.0, std::nullopt, kFastNorm);

    const auto step1 = static_cast<std::size_t>(std::ceil(n / 12.0));
    CHECK(rep.step1_entries.size() == step1);
    for (const auto& jl : rep.J_l_sets) CHECK(jl.empty());
    for (const auto& il : rep.I_l_sets) CHECK(il.empty());
    auto sorted_hat = rep.J_hat;
    std::sort(sorted_hat.begin(), sorted_hat.end());
    CHECK(rep.J == sorted_hat);
    CHECK(rep.J_hat.size() == n / 24);

    // changed entries lie inside step1 union I_hat x J_hat
    std::set<std::size_t> step1_set(rep.step1_entries.begin(), rep.step1_entries.end());
    std::set<std::size_t> iset(rep.I.begin(), rep.I.end());
    std::set<std::size_t> jset(rep.J.begin(), rep.J.end());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (a.at(i, j) != out.at(i, j)) {
                bool in_step1 = step1_set.count(i * n + j) > 0;
                bool in_product = iset.count(i) > 0 && jset.count(j) > 0;
                CHECK((in_step1 || in_product));
            }
}

TEST_CASE("planted heavy column lands in J_0") {
    const std::size_t n = 1296;
    const double eps = 1.0 / 6.0;
    DenseMatrix a(n, n);
    RngStream rng(derive_seed(7, 0, "bg"));
    for (double& x : a.data) x = 0.5 * (rng.uniform01() - 0.5);

    // Step-1 fodder: ceil(n eps / 2) = 108 giant entries off column 5.
    const std::size_t step1 = static_cast<std::size_t>(std::ceil(n * eps / 2.0));
    for (std::size_t k = 0; k < step1; ++k) a.at(k, 20 + k % 100) = 100.0 + static_cast<double>(k);

    // Planted level-0 entries: 2*ceil(c_eps n p_0) = 2*ceil(c_eps eps) entries
    // in column 5, just below the step-1 magnitudes.
    const double t0 = c_epsilon(eps) * eps;  // c_eps * n * p_0
    const auto planted = 2 * static_cast<std::size_t>(std::ceil(t0));
    for (std::size_t k = 0; k < planted; ++k) a.at(200 + k, 5) = 50.0;

    auto [out, rep] = run_algorithm1(a, eps, std::nullopt, kFastNorm);
    REQUIRE(!rep.J_l_sets.empty());
    const auto& j0 = rep.J_l_sets[0];
    CHECK(std::find(j0.begin(), j0.end(), std::size_t{5}) != j0.end());
    CHECK(std::find(rep.J.begin(), rep.J.end(), std::size_t{5}) != rep.J.end());
}

TEST_CASE("locality and budget on random heavy-tailed input") {
    const std::size_t n = 1500;
    const double eps = 1.0 / 6.0;
    auto a = sample(DistKind::symmetric_pareto, n, 11, 2.2);
    auto [out, rep] = run_algorithm1(a, eps, std::nullopt, kFastNorm);

    auto fp = changed_footprint(a, out);
    const auto cap = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(n)));
    CHECK(fp.rows <= cap);
    CHECK(fp.cols <= cap);
    CHECK(rep.J_hat.size() ==
          static_cast<std::size_t>(std::floor(static_cast<double>(n) * eps / 4.0)));
    CHECK(rep.norm_after <= rep.norm_before * (1.0 + 1e-5));

    std::size_t union_jl = 0;
    std::set<std::size_t> jl_union;
    for (const auto& jl : rep.J_l_sets) jl_union.insert(jl.begin(), jl.end());
    union_jl = jl_union.size();
    CHECK(static_cast<double>(union_jl) <= static_cast<double>(n) * eps / 4.0);
}

TEST_CASE("running the pipeline twice stays local and monotone") {
    const std::size_t n = 1296;
    const double eps = 1.0 / 6.0;
    auto a = sample(DistKind::symmetric_pareto, n, 13, 2.2);
    auto [a1, rep1] = run_algorithm1(a, eps, std::nullopt, kFastNorm);
    auto [a2, rep2] = run_algorithm1(a1, eps, std::nullopt, kFastNorm);

    CHECK(rep2.norm_after <= rep1.norm_after * (1.0 + 1e-5));
    auto fp2 = changed_footprint(a1, a2);
    const auto cap = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(n)));
    CHECK(fp2.rows <= cap);
    CHECK(fp2.cols <= cap);

    // the second step-1 pass only picks entries that are still nonzero, so it
    // is disjoint from everything the first run zeroed
    std::set<std::size_t> zeroed1;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.data[k] != a1.data[k]) zeroed1.insert(k);
    std::size_t overlap = 0;
    for (std::size_t pos : rep2.step1_entries)
        if (zeroed1.count(pos)) ++overlap;
    CHECK(overlap == 0);
}

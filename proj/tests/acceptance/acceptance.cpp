// Acceptance gate: end-to-end statistical and structural checks at the
// calibrated desk scale. Each criterion prints one PASS/FAIL line; the
// process exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "normreg/algo1.hpp"
#include "normreg/bern.hpp"
#include "normreg/dist.hpp"
#include "normreg/experiment.hpp"
#include "normreg/levels.hpp"
#include "normreg/trim.hpp"

using namespace normreg;

namespace {

constexpr std::uint64_t kMasterSeed = 20260824;

// Norm settings for large matrices: a power-iteration tolerance of 1e-5 keeps
// n = 4096 runs inside the time budget and is far below the 1.5x / monotone
// margins these criteria test.
const NormOptions kBigNorm{.tol = 1e-5, .max_iters = 2000, .restarts = 2};

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

DenseMatrix sample(DistKind kind, double alpha, std::size_t n, std::uint64_t trial,
                   const char* purpose) {
    DistributionSpec spec{kind, 0.5, alpha, true};
    RngStream rng(derive_seed(kMasterSeed, trial, purpose));
    return sample_matrix(spec, n, rng);
}

struct Criterion {
    std::string name;
    bool (*run)(std::string& detail);
};

// 1. Gaussian control: median norm / sqrt(n) near 2.
bool criterion1(std::string& detail) {
    const double t0 = now_seconds();
    std::vector<double> ratios;
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto a = sample(DistKind::gaussian, 3.0, 1000, t, "c1");
        ratios.push_back(operator_norm(a, kBigNorm).value / std::sqrt(1000.0));
    }
    double med = median(ratios);
    double secs = now_seconds() - t0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "median ratio %.4f (want [1.9, 2.15]), %.1fs (< 60s)",
                  med, secs);
    detail = buf;
    return med >= 1.9 && med <= 2.15 && secs < 60.0;
}

// 2. Heavy-tail blow-up and repair across n in {512,...,4096}.
bool criterion2(std::string& detail) {
    const double t0 = now_seconds();
    const double eps = 1.0 / 6.0;
    const std::vector<std::size_t> sizes{512, 1024, 2048, 4096};
    std::vector<double> med_before, med_bound;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        std::size_t n = sizes[si];
        std::vector<double> before, bound;
        double den = std::sqrt(c_epsilon(eps) * static_cast<double>(n) *
                               std::log(std::log(static_cast<double>(n))));
        for (std::uint64_t t = 0; t < 10; ++t) {
            auto a = sample(DistKind::symmetric_pareto, 2.2, n, 100 * si + t, "c2");
            auto [m, rep] = trim_topk_rows_cols(a, eps, kBigNorm);
            before.push_back(rep.norm_before / std::sqrt(static_cast<double>(n)));
            bound.push_back(rep.norm_after / den);
        }
        med_before.push_back(median(before));
        med_bound.push_back(median(bound));
    }
    bool increasing = true;
    for (std::size_t i = 1; i < med_before.size(); ++i)
        if (!(med_before[i] > med_before[i - 1])) increasing = false;
    double lo = *std::min_element(med_bound.begin(), med_bound.end());
    double hi = *std::max_element(med_bound.begin(), med_bound.end());
    double spread = hi / lo;
    double secs = now_seconds() - t0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "unregularized medians/sqrt(n) %.2f %.2f %.2f %.2f %s; "
                  "trimmed bound-ratio spread %.3fx (< 1.5x); %.0fs (< 600s)",
                  med_before[0], med_before[1], med_before[2], med_before[3],
                  increasing ? "increasing" : "NOT increasing", spread, secs);
    detail = buf;
    return increasing && spread < 1.5 && secs < 600.0;
}

// 3. Five-step pipeline locality at n = 4096.
bool criterion3(std::string& detail) {
    const std::size_t n = 4096;
    const double eps = 1.0 / 6.0;
    const auto cap = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(n)));
    const auto jhat = static_cast<std::size_t>(std::floor(static_cast<double>(n) * eps / 4.0));
    int local_ok = 0, jhat_ok = 0, norm_ok = 0;
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto a = sample(DistKind::symmetric_pareto, 2.2, n, t, "c3");
        auto [m, rep] = run_algorithm1(a, eps, std::nullopt, kBigNorm);
        auto fp = changed_footprint(a, m);
        if (fp.rows <= cap && fp.cols <= cap) ++local_ok;
        if (rep.J_hat.size() == jhat) ++jhat_ok;
        if (rep.norm_after <= rep.norm_before * (1.0 + 1e-5)) ++norm_ok;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "footprint <= %zu in %d/10, |J_hat| = %zu in %d/10, norm non-increase %d/10",
                  cap, local_ok, jhat, jhat_ok, norm_ok);
    detail = buf;
    return local_ok == 10 && jhat_ok == 10 && norm_ok == 10;
}

// 4. Power iteration vs. Jacobi oracle, plus zeroing monotonicity.
bool criterion4(std::string& detail) {
    int match = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto a = sample(DistKind::gaussian, 3.0, 8, t, "c4a");
        double est = operator_norm(a).value;
        double oracle = operator_norm_oracle(a);
        if (std::abs(est - oracle) <= 1e-6 * std::max(1.0, oracle)) ++match;
    }
    int mono = 0;
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto a = sample(DistKind::gaussian, 3.0, 8, t, "c4b");
        RngStream rng(derive_seed(kMasterSeed, t, "c4-pattern"));
        // rows/columns only: zeroing a single entry can raise the norm
        ZeroPattern z;
        for (std::size_t i = 0; i < 8; ++i) {
            if (rng.uniform01() < 0.3) z.rows.push_back(i);
            if (rng.uniform01() < 0.3) z.cols.push_back(i);
        }
        auto out = apply_zero_pattern(a, z);
        if (operator_norm_oracle(out) <= operator_norm_oracle(a) * (1.0 + 1e-12)) ++mono;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "oracle match %d/50, zeroing monotone %d/50", match, mono);
    detail = buf;
    return match == 50 && mono == 50;
}

// 5. Order-statistic quantile sandwich for the alpha = 3 Pareto law.
bool criterion5(std::string& detail) {
    DistributionSpec spec{DistKind::symmetric_pareto, 1.0, 3.0, true};
    int good = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        auto a = sample(DistKind::symmetric_pareto, 3.0, 200, t, "c5");
        bool ok = true;
        for (int k = 3; k <= 8; ++k) {
            auto est = estimate_quantile(a, k, spec);
            if (!est.lower_ref || !est.upper_ref ||
                est.order_statistic_sq < *est.lower_ref ||
                est.order_statistic_sq > *est.upper_ref)
                ok = false;
        }
        if (ok) ++good;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "sandwich held in %d/100 trials (>= 95)", good);
    detail = buf;
    return good >= 95;
}

// 6. Weight-cut conclusions and the degree-trim postcondition on sparse input.
bool criterion6(std::string& detail) {
    const std::size_t n = 5000;
    const double L = 10.0;
    std::string parts;
    bool pass = true;
    for (double np : {2.0, 5.0}) {
        const double p = np / static_cast<double>(n);
        int concl_ok = 0, post_ok = 0;
        for (std::uint64_t t = 0; t < 100; ++t) {
            RngStream rng(derive_seed(kMasterSeed, t + (np > 2 ? 1000 : 0), "c6"));
            auto b = sample_bernoulli(n, p, true, rng);

            auto cut = weight_column_cut(b, p, L);
            double jbound = static_cast<double>(n) * std::exp(-L * np);
            bool good = static_cast<double>(cut.J.size()) <= jbound;
            std::vector<char> in_J(n, 0);
            for (auto j : cut.J) in_J[j] = 1;
            std::vector<std::size_t> residual(n, 0);
            for (std::size_t k = 0; k < b.nnz(); ++k)
                if (!in_J[b.cols[k]]) ++residual[b.rows[k]];
            for (auto r : residual)
                if (static_cast<double>(r) > 10.0 * L * np) good = false;
            if (good) ++concl_ok;

            double thr = 20.0 * np;
            auto [out, rep] = degree_trim(b, thr, kBigNorm);
            auto rd = row_degrees(out);
            auto cd = col_degrees(out);
            auto max_r = *std::max_element(rd.begin(), rd.end());
            auto max_c = *std::max_element(cd.begin(), cd.end());
            if (static_cast<double>(std::max(max_r, max_c)) <= thr) ++post_ok;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "np=%.0f: conclusions %d/100, postcondition %d/100; ",
                      np, concl_ok, post_ok);
        parts += buf;
        if (concl_ok < 99 || post_ok != 100) pass = false;
    }
    detail = parts;
    return pass;
}

// 7. Deterministic bilinear-form bound on random triples.
bool criterion7(std::string& detail) {
    int violations = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        std::size_t n = 3 + t % 14;
        auto q = sample(DistKind::gaussian, 3.0, n, t, "c7q");
        RngStream rng(derive_seed(kMasterSeed, t, "c7uv"));
        if (t % 2 == 0)  // half the triples are sparse
            for (double& x : q.data)
                if (rng.uniform01() < 0.7) x = 0.0;
        std::vector<double> u(n), v(n);
        double un = 0.0, vn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = rng.gaussian();
            v[i] = rng.gaussian();
            un += u[i] * u[i];
            vn += v[i] * v[i];
        }
        un = std::sqrt(un);
        vn = std::sqrt(vn);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] /= un;
            v[i] /= vn;
        }
        if (!bilinear_bound_check(q, u, v).holds) ++violations;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d violations in 1000 triples (want 0)", violations);
    detail = buf;
    return violations == 0;
}

// 8. Exhaustive subset discrepancy: minimal constants exist and are stable.
bool criterion8(std::string& detail) {
    const double p = 0.3;
    std::vector<double> c1s, c2s, uniform;
    bool finite = true, consistent = true;
    for (std::uint64_t t = 0; t < 20; ++t) {
        RngStream rng(derive_seed(kMasterSeed, t, "c8"));
        auto b = sample_bernoulli(8, p, false, rng);
        auto [c1, c2] = discrepancy_min_constants(b, p);
        if (!std::isfinite(c1) || !std::isfinite(c2)) finite = false;
        if (!discrepancy_check(b, p, c1 + 1e-9, c2 + 1e-9).all_pairs_ok) consistent = false;
        c1s.push_back(c1);
        c2s.push_back(c2);
        // the (C1, C2) trade-off is a frontier; the seed-to-seed calibration
        // is measured on the single constant t with C1 = C2 = t
        double lo = 0.0, hi = 64.0;
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            if (discrepancy_check(b, p, mid, mid).all_pairs_ok) hi = mid; else lo = mid;
        }
        uniform.push_back(hi);
    }
    double u_lo = *std::min_element(uniform.begin(), uniform.end());
    double u_hi = *std::max_element(uniform.begin(), uniform.end());
    double spread = u_lo > 0.0 ? u_hi / u_lo : std::numeric_limits<double>::infinity();
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "median lexicographic (C1, C2) = (%.3f, %.3f); uniform constant "
                  "median %.3f, spread %.2fx (<= 2x)",
                  median(c1s), median(c2s), median(uniform), spread);
    detail = buf;
    return finite && consistent && spread <= 2.0;
}

// 9. Row/column trimming vs. entry truncation at level sqrt(n).
bool criterion9(std::string& detail) {
    const std::size_t n = 2048;
    const double eps = 1.0 / 6.0;
    std::vector<double> topk_after, trunc_after;
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto a = sample(DistKind::symmetric_pareto, 2.2, n, t, "c9");
        auto [m1, r1] = trim_topk_rows_cols(a, eps, kBigNorm);
        auto [m2, r2] = truncate_entries(a, std::sqrt(static_cast<double>(n)), kBigNorm);
        topk_after.push_back(r1.norm_after);
        trunc_after.push_back(r2.norm_after);
    }
    double m_topk = median(topk_after);
    double m_trunc = median(trunc_after);
    double rt = std::sqrt(static_cast<double>(n));
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "median trimmed norm/sqrt(n) %.3f vs truncated %.3f (trimmed <= truncated)",
                  m_topk / rt, m_trunc / rt);
    detail = buf;
    return m_topk <= m_trunc;
}

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"gaussian control", criterion1},
        {"heavy-tail growth and trimmed boundedness", criterion2},
        {"pipeline locality at n=4096", criterion3},
        {"norm oracle equivalence and monotonicity", criterion4},
        {"quantile sandwich", criterion5},
        {"sparse weight cut and degree trim", criterion6},
        {"bilinear bound", criterion7},
        {"subset discrepancy constants", criterion8},
        {"trim vs truncation baseline", criterion9},
    };
    int failures = 0;
    int idx = 1;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << idx << ". " << c.name
                  << ": " << detail << std::endl;
        if (!ok) ++failures;
        ++idx;
    }
    if (failures) std::cout << failures << " criteria failed" << std::endl;
    else std::cout << "all criteria passed" << std::endl;
    return failures ? 1 : 0;
}

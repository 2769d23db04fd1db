#include "normreg/bern.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace normreg {

SparsePattern sample_bernoulli(std::size_t n, double p, bool make_signed, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("sample_bernoulli: p must be in [0, 1]");
    SparsePattern b;
    b.n = n;
    b.p = p;
    b.is_signed = make_signed;
    const double scale = (make_signed && p > 0.0) ? 1.0 / std::sqrt(p) : 1.0;
    const std::size_t total = n * n;

    if (p >= 1.0) {
        for (std::size_t k = 0; k < total; ++k) {
            b.rows.push_back(k / n);
            b.cols.push_back(k % n);
            b.values.push_back(make_signed ? ((rng.next_u64() & 1u) ? scale : -scale) : 1.0);
        }
        return b;
    }
    if (p == 0.0) return b;

    // Geometric gap sampling over the flat position index.
    const double log1mp = std::log1p(-p);
    double k = -1.0;
    while (true) {
        double gap = std::floor(std::log(rng.uniform01()) / log1mp) + 1.0;
        k += gap;
        if (k >= static_cast<double>(total)) break;
        auto pos = static_cast<std::size_t>(k);
        b.rows.push_back(pos / n);
        b.cols.push_back(pos % n);
        b.values.push_back(make_signed ? ((rng.next_u64() & 1u) ? scale : -scale) : 1.0);
    }
    return b;
}

std::vector<std::size_t> row_degrees(const SparsePattern& b) {
    std::vector<std::size_t> deg(b.n, 0);
    for (std::size_t r : b.rows) ++deg[r];
    return deg;
}

std::vector<std::size_t> col_degrees(const SparsePattern& b) {
    std::vector<std::size_t> deg(b.n, 0);
    for (std::size_t c : b.cols) ++deg[c];
    return deg;
}

std::pair<SparsePattern, RegularizationReport>
degree_trim(const SparsePattern& b, double threshold, const NormOptions& nopts) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("degree_trim: threshold must be > 0");

    auto rdeg = row_degrees(b);
    auto cdeg = col_degrees(b);
    std::vector<char> kill_row(b.n, 0), kill_col(b.n, 0);
    RegularizationReport report;
    report.threshold_used = threshold;
    for (std::size_t i = 0; i < b.n; ++i) {
        if (static_cast<double>(rdeg[i]) > threshold) {
            kill_row[i] = 1;
            report.pattern.rows.push_back(i);
        }
        if (static_cast<double>(cdeg[i]) > threshold) {
            kill_col[i] = 1;
            report.pattern.cols.push_back(i);
        }
    }

    SparsePattern out;
    out.n = b.n;
    out.p = b.p;
    out.is_signed = b.is_signed;
    std::vector<char> row_hit(b.n, 0), col_hit(b.n, 0);
    for (std::size_t k = 0; k < b.nnz(); ++k) {
        if (kill_row[b.rows[k]] || kill_col[b.cols[k]]) {
            ++report.entries_changed;
            row_hit[b.rows[k]] = 1;
            col_hit[b.cols[k]] = 1;
            continue;
        }
        out.rows.push_back(b.rows[k]);
        out.cols.push_back(b.cols[k]);
        out.values.push_back(b.values[k]);
    }
    report.rows_touched = static_cast<std::size_t>(std::count(row_hit.begin(), row_hit.end(), 1));
    report.cols_touched = static_cast<std::size_t>(std::count(col_hit.begin(), col_hit.end(), 1));

    auto before = sparse_operator_norm(b, nopts);
    auto after = sparse_operator_norm(out, nopts);
    report.norm_before = before.value;
    report.norm_after = after.value;
    report.norm_before_converged = before.converged;
    report.norm_after_converged = after.converged;
    return {std::move(out), std::move(report)};
}

WeightCut weight_column_cut(const SparsePattern& b, double p, double L) {
    if (L < 10.0)
        std::cerr << "weight_column_cut: L = " << L
                  << " below the supported range (L >= 10); results are experimental\n";
    const double t = L * static_cast<double>(b.n) * p;
    if (!(t > 0.0)) throw std::invalid_argument("weight_column_cut: Lnp must be > 0");

    WeightCut cut;
    cut.log_V.assign(b.n, 0.0);
    auto cdeg = col_degrees(b);
    for (std::size_t j = 0; j < b.n; ++j) {
        double e = static_cast<double>(cdeg[j]);
        if (e > t) cut.log_V[j] = e * std::log(t / e);
        if (cut.log_V[j] < std::log(0.1)) cut.J.push_back(j);
    }
    return cut;
}

namespace {

struct PairSlack {
    double slack_a;
    double slack_b;  // -inf when (B) is unusable
};

}  // namespace

DiscrepancyResult discrepancy_check(const SparsePattern& b, double p,
                                    double C1, double C2) {
    if (b.n > 12)
        throw std::invalid_argument("discrepancy_check: n must be <= 12 (exhaustive)");
    const auto n = static_cast<unsigned>(b.n);
    std::vector<std::uint32_t> row_mask(b.n, 0);
    for (std::size_t k = 0; k < b.nnz(); ++k)
        row_mask[b.rows[k]] |= (1u << b.cols[k]);

    DiscrepancyResult res;
    res.all_pairs_ok = true;
    res.worst_margin = std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << n) - 1;
    std::vector<int> rc(b.n, 0);
    for (std::uint32_t T = 1; T <= full; ++T) {
        const int szT = std::popcount(T);
        for (std::size_t i = 0; i < b.n; ++i) rc[i] = std::popcount(row_mask[i] & T);
        const double logT = std::log(static_cast<double>(n) / szT);
        for (std::uint32_t S = 1; S <= full; ++S) {
            const int szS = std::popcount(S);
            double e = 0.0;
            for (std::uint32_t s = S; s;) {
                unsigned i = static_cast<unsigned>(std::countr_zero(s));
                e += rc[i];
                s &= s - 1;
            }
            const double stp = szS * szT * p;
            const double slack_a = C1 * stp - e;
            double slack_b;
            if (e <= stp) {
                slack_b = C2 * szT * logT;  // LHS <= 0 <= RHS
            } else {
                slack_b = C2 * szT * logT - e * std::log(e / stp);
            }
            const double margin = std::max(slack_a, slack_b);
            if (margin < res.worst_margin) {
                res.worst_margin = margin;
                res.worst_S = S;
                res.worst_T = T;
                res.worst_e = e;
            }
            if (margin < -1e-12) res.all_pairs_ok = false;
        }
    }
    return res;
}

std::pair<double, double> discrepancy_min_constants(const SparsePattern& b, double p) {
    if (b.n > 12)
        throw std::invalid_argument("discrepancy_min_constants: n must be <= 12");
    const auto n = static_cast<unsigned>(b.n);
    std::vector<std::uint32_t> row_mask(b.n, 0);
    for (std::size_t k = 0; k < b.nnz(); ++k)
        row_mask[b.rows[k]] |= (1u << b.cols[k]);

    const std::uint32_t full = (1u << n) - 1;
    // Pairs with |T| = n have zero right-hand side in (B), so they pin C1;
    // everything else can then fall back to (B).
    double c1 = 1.0;
    std::vector<int> rc(b.n, 0);
    {
        const std::uint32_t T = full;
        for (std::size_t i = 0; i < b.n; ++i) rc[i] = std::popcount(row_mask[i]);
        (void)T;
        for (std::uint32_t S = 1; S <= full; ++S) {
            double e = 0.0;
            for (std::uint32_t s = S; s;) {
                e += rc[static_cast<unsigned>(std::countr_zero(s))];
                s &= s - 1;
            }
            const double stp = std::popcount(S) * static_cast<double>(n) * p;
            if (e > stp) c1 = std::max(c1, e / stp);
        }
    }

    double c2 = 0.0;
    for (std::uint32_t T = 1; T < full; ++T) {
        const int szT = std::popcount(T);
        for (std::size_t i = 0; i < b.n; ++i) rc[i] = std::popcount(row_mask[i] & T);
        const double logT = std::log(static_cast<double>(n) / szT);
        for (std::uint32_t S = 1; S <= full; ++S) {
            const int szS = std::popcount(S);
            double e = 0.0;
            for (std::uint32_t s = S; s;) {
                e += rc[static_cast<unsigned>(std::countr_zero(s))];
                s &= s - 1;
            }
            const double stp = szS * szT * p;
            if (e <= c1 * stp) continue;  // (A) already holds
            c2 = std::max(c2, e * std::log(e / stp) / (szT * logT));
        }
    }
    return {c1, c2};
}

NormEstimate sparse_operator_norm(const SparsePattern& b, const NormOptions& opts) {
    if (opts.tol <= 0.0) throw std::invalid_argument("sparse_operator_norm: tol must be > 0");
    if (b.n == 0) return {0.0, true, 0};

    NormEstimate best{0.0, true, 0};
    std::vector<double> x(b.n), y(b.n), z(b.n);
    for (int restart = 0; restart < opts.restarts; ++restart) {
        std::mt19937_64 eng(opts.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(restart + 1));
        double xn = 0.0;
        for (double& xi : x) {
            xi = static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53 - 0.5;
            xn += xi * xi;
        }
        xn = std::sqrt(xn);
        for (double& xi : x) xi /= xn;

        double sigma_prev = -1.0;
        double sigma = 0.0;
        bool converged = false;
        int iters = 0;
        for (; iters < opts.max_iters; ++iters) {
            std::fill(y.begin(), y.end(), 0.0);
            for (std::size_t k = 0; k < b.nnz(); ++k)
                y[b.rows[k]] += b.values[k] * x[b.cols[k]];
            double sq = 0.0;
            for (double yi : y) sq += yi * yi;
            sigma = std::sqrt(sq);
            if (sigma == 0.0) { converged = true; break; }
            if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= opts.tol * sigma) {
                converged = true;
                ++iters;
                break;
            }
            sigma_prev = sigma;
            std::fill(z.begin(), z.end(), 0.0);
            for (std::size_t k = 0; k < b.nnz(); ++k)
                z[b.cols[k]] += b.values[k] * y[b.rows[k]];
            double zn = 0.0;
            for (double zi : z) zn += zi * zi;
            zn = std::sqrt(zn);
            if (zn == 0.0) { converged = true; break; }
            for (std::size_t j = 0; j < b.n; ++j) x[j] = z[j] / zn;
        }
        if (sigma > best.value) best.value = sigma;
        best.iterations += iters;
        if (!converged) best.converged = false;
    }
    return best;
}

DenseMatrix densify(const SparsePattern& b) {
    DenseMatrix a(b.n, b.n);
    for (std::size_t k = 0; k < b.nnz(); ++k) a.at(b.rows[k], b.cols[k]) = b.values[k];
    return a;
}

void write_pattern(const SparsePattern& b, std::ostream& out) {
    out.precision(17);
    out << b.n << ' ' << b.p << ' ' << (b.is_signed ? 1 : 0) << '\n';
    for (std::size_t k = 0; k < b.nnz(); ++k)
        out << b.rows[k] << ' ' << b.cols[k] << ' ' << b.values[k] << '\n';
}

SparsePattern read_pattern(std::istream& in) {
    SparsePattern b;
    int signed_flag = 0;
    if (!(in >> b.n >> b.p >> signed_flag))
        throw std::runtime_error("sparse pattern: bad header");
    b.is_signed = signed_flag != 0;
    std::size_t r, c;
    double v;
    while (in >> r >> c >> v) {
        if (r >= b.n || c >= b.n) throw std::runtime_error("sparse pattern: index out of bounds");
        b.rows.push_back(r);
        b.cols.push_back(c);
        b.values.push_back(v);
    }
    return b;
}

}  // namespace normreg

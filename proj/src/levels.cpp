#include "normreg/levels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace normreg {

int default_l_max(std::size_t n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("default_l_max: epsilon must be in (0, 1)");
    double num = std::log(static_cast<double>(n));
    double den = std::log(std::pow(epsilon, -4.0));  // ln eps^-4
    if (num < den)
        throw std::invalid_argument(
            "matrix too small for this epsilon: ln n < ln eps^-4");
    return static_cast<int>(std::floor(std::log2(num / den)));
}

LevelDecomposition build_levels(const DenseMatrix& a, double epsilon,
                                std::optional<int> l_max_override) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("build_levels: epsilon must be in (0, 1)");
    if (!a.square()) throw std::invalid_argument("build_levels: matrix must be square");

    LevelDecomposition dec;
    dec.n = a.n_rows;
    dec.epsilon = epsilon;
    dec.l_max = l_max_override ? *l_max_override : default_l_max(dec.n, epsilon);
    if (dec.l_max < 0)
        throw std::invalid_argument("build_levels: l_max must be >= 0");

    const std::size_t total = a.size();
    dec.ranking.resize(total);
    std::iota(dec.ranking.begin(), dec.ranking.end(), std::size_t{0});
    const double* d = a.data.data();
    std::sort(dec.ranking.begin(), dec.ranking.end(),
              [d](std::size_t x, std::size_t y) {
                  double ax = std::abs(d[x]), ay = std::abs(d[y]);
                  if (ax != ay) return ax > ay;
                  return x < y;  // ties by row-major position
              });

    const double ne = epsilon * static_cast<double>(dec.n);
    dec.step1_count = std::min<std::size_t>(
        total, static_cast<std::size_t>(std::ceil(ne / 2.0)));

    for (int l = 0; l <= dec.l_max; ++l) {
        // 1-based ranks ceil(2^(l-1) n eps) + 1 .. ceil(2^l n eps), clamped
        double scale_lo = std::pow(2.0, l - 1);
        double scale_hi = std::pow(2.0, l);
        auto lo = static_cast<std::size_t>(std::ceil(scale_lo * ne)) + 1;
        auto hi = std::min<std::size_t>(
            total, static_cast<std::size_t>(std::ceil(scale_hi * ne)));
        if (lo > total) lo = total + 1;  // empty range
        dec.level_ranges.emplace_back(lo, hi);
        dec.p_levels.push_back(scale_hi * epsilon / static_cast<double>(dec.n));
    }
    return dec;
}

std::string LevelDecomposition::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["epsilon"] = epsilon;
    j["l_max"] = l_max;
    j["step1_count"] = step1_count;
    j["p_levels"] = p_levels;
    nlohmann::json ranges = nlohmann::json::array();
    for (auto [lo, hi] : level_ranges) ranges.push_back({lo, hi});
    j["level_rank_ranges"] = std::move(ranges);
    return j.dump(2);
}

namespace {

// Value with the r-th largest |.| (1-based), ties by row-major position.
double order_statistic(const DenseMatrix& a, std::size_t rank) {
    std::vector<std::size_t> idx(a.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const double* d = a.data.data();
    auto cmp = [d](std::size_t x, std::size_t y) {
        double ax = std::abs(d[x]), ay = std::abs(d[y]);
        if (ax != ay) return ax > ay;
        return x < y;
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                     idx.end(), cmp);
    return d[idx[rank - 1]];
}

}  // namespace

QuantileEstimate estimate_quantile(const DenseMatrix& a, int k) {
    if (k < 1) throw std::invalid_argument("estimate_quantile: k must be positive");
    const double total = static_cast<double>(a.size());
    double r = std::ceil(total * std::pow(2.0, 1 - k));
    if (!(r >= 1.0 && r <= total))
        throw std::invalid_argument("estimate_quantile: rank out of range");
    QuantileEstimate est;
    est.k = k;
    double v = order_statistic(a, static_cast<std::size_t>(r));
    est.order_statistic_sq = v * v;
    return est;
}

QuantileEstimate estimate_quantile(const DenseMatrix& a, int k,
                                   const DistributionSpec& spec) {
    QuantileEstimate est = estimate_quantile(a, k);
    if (spec.kind == DistKind::symmetric_pareto) {
        double x0 = spec.pareto_x0();
        est.lower_ref = pareto_square_quantile(spec.alpha, x0, std::max(0, k - 2));
        est.upper_ref = pareto_square_quantile(spec.alpha, x0, k);
    }
    return est;
}

}  // namespace normreg

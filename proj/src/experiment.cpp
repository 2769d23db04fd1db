#include "normreg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "normreg/algo1.hpp"
#include "normreg/bern.hpp"
#include "normreg/trim.hpp"

namespace normreg {

std::string to_string(Method m) {
    switch (m) {
        case Method::none: return "none";
        case Method::topk: return "topk";
        case Method::threshold: return "threshold";
        case Method::algo1: return "algo1";
        case Method::truncate: return "truncate";
        case Method::degree_trim: return "degree_trim";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "none") return Method::none;
    if (s == "topk") return Method::topk;
    if (s == "threshold") return Method::threshold;
    if (s == "algo1") return Method::algo1;
    if (s == "truncate") return Method::truncate;
    if (s == "degree_trim") return Method::degree_trim;
    throw std::invalid_argument("unknown method: " + s);
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
    if (sizes.empty()) throw std::invalid_argument("config: sizes must be nonempty");
    if (epsilons.empty()) throw std::invalid_argument("config: epsilons must be nonempty");
    distribution.validate();
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["sizes"] = sizes;
    j["epsilons"] = epsilons;
    j["distribution"] = nlohmann::json::parse(distribution.to_json());
    std::vector<std::string> ms;
    for (Method m : methods) ms.push_back(to_string(m));
    j["methods"] = ms;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["output"] = output;
    j["norm_tol"] = norm_tol;
    j["norm_max_iters"] = norm_max_iters;
    j["norm_restarts"] = norm_restarts;
    j["threshold_constant"] = threshold_constant;
    j["degree_constant"] = degree_constant;
    j["include_timing"] = include_timing;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ExperimentConfig c;
    c.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    c.epsilons = j.at("epsilons").get<std::vector<double>>();
    c.distribution = DistributionSpec::from_json(j.at("distribution").dump());
    for (const auto& m : j.at("methods"))
        c.methods.push_back(method_from_string(m.get<std::string>()));
    c.trials = j.value("trials", std::size_t{1});
    c.master_seed = j.value("master_seed", std::uint64_t{0});
    c.output = j.value("output", std::string{});
    c.norm_tol = j.value("norm_tol", 1e-6);
    c.norm_max_iters = j.value("norm_max_iters", 10000);
    c.norm_restarts = j.value("norm_restarts", 3);
    c.threshold_constant = j.value("threshold_constant", 2.0);
    c.degree_constant = j.value("degree_constant", 20.0);
    c.include_timing = j.value("include_timing", true);
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

namespace {

std::optional<double> bound_denominator(std::size_t n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) return std::nullopt;
    double lnln = std::log(std::log(static_cast<double>(n)));
    if (!(lnln > 0.0)) return std::nullopt;  // n < e^e
    return std::sqrt(c_epsilon(epsilon) * static_cast<double>(n) * lnln);
}

bool algo1_applicable(std::size_t n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0 / 6.0)) return false;
    return std::log(static_cast<double>(n)) >= std::log(std::pow(epsilon, -4.0));
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& config, std::ostream* log) {
    config.validate();
    NormOptions nopts;
    nopts.tol = config.norm_tol;
    nopts.max_iters = config.norm_max_iters;
    nopts.restarts = config.norm_restarts;

    std::vector<ResultRow> rows;
    std::uint64_t cell_index = 0;
    for (Method method : config.methods) {
        for (std::size_t n : config.sizes) {
            for (double eps : config.epsilons) {
                const std::uint64_t cell_seed =
                    derive_seed(config.master_seed, cell_index, "cell");
                ++cell_index;

                if (method == Method::algo1 && !algo1_applicable(n, eps)) {
                    if (log)
                        *log << "skip algo1 cell n=" << n << " eps=" << eps
                             << ": precondition (eps <= 1/6, ln n >= ln eps^-4) fails\n";
                    continue;
                }
                if (method == Method::degree_trim &&
                    config.distribution.kind != DistKind::signed_bernoulli) {
                    if (log)
                        *log << "skip degree_trim cell n=" << n << " eps=" << eps
                             << ": distribution is not signed_bernoulli\n";
                    continue;
                }

                for (std::size_t trial = 0; trial < config.trials; ++trial) {
                    const std::uint64_t seed = derive_seed(cell_seed, trial, "matrix");
                    RngStream rng(seed);
                    auto t0 = std::chrono::steady_clock::now();

                    ResultRow row;
                    row.method = method;
                    row.n = n;
                    row.epsilon = eps;
                    row.trial = trial;
                    row.seed = seed;

                    bool before_ok = true, after_ok = true;
                    if (method == Method::degree_trim) {
                        auto b = sample_bernoulli(n, config.distribution.p, true, rng);
                        double thr = config.degree_constant *
                                     static_cast<double>(n) * config.distribution.p;
                        auto [trimmed, rep] = degree_trim(b, thr, nopts);
                        row.norm_before = rep.norm_before;
                        row.norm_after = rep.norm_after;
                        row.rows_touched = rep.rows_touched;
                        row.cols_touched = rep.cols_touched;
                        row.entries_changed = rep.entries_changed;
                        before_ok = rep.norm_before_converged;
                        after_ok = rep.norm_after_converged;
                    } else {
                        DenseMatrix a = sample_matrix(config.distribution, n, rng);
                        switch (method) {
                            case Method::none: {
                                auto est = operator_norm(a, nopts);
                                row.norm_before = row.norm_after = est.value;
                                before_ok = after_ok = est.converged;
                                break;
                            }
                            case Method::topk: {
                                auto [m, rep] = trim_topk_rows_cols(a, eps, nopts);
                                row.norm_before = rep.norm_before;
                                row.norm_after = rep.norm_after;
                                row.rows_touched = rep.rows_touched;
                                row.cols_touched = rep.cols_touched;
                                row.entries_changed = rep.entries_changed;
                                before_ok = rep.norm_before_converged;
                                after_ok = rep.norm_after_converged;
                                break;
                            }
                            case Method::threshold: {
                                double thr = config.threshold_constant *
                                             std::sqrt(c_epsilon(eps) * static_cast<double>(n));
                                auto [m, rep] = trim_threshold_rows_cols(a, thr, nopts);
                                row.norm_before = rep.norm_before;
                                row.norm_after = rep.norm_after;
                                row.rows_touched = rep.rows_touched;
                                row.cols_touched = rep.cols_touched;
                                row.entries_changed = rep.entries_changed;
                                before_ok = rep.norm_before_converged;
                                after_ok = rep.norm_after_converged;
                                break;
                            }
                            case Method::algo1: {
                                auto [m, rep] = run_algorithm1(a, eps, std::nullopt, nopts);
                                auto fp = changed_footprint(a, m);
                                row.norm_before = rep.norm_before;
                                row.norm_after = rep.norm_after;
                                row.rows_touched = fp.rows;
                                row.cols_touched = fp.cols;
                                row.entries_changed = fp.entries;
                                before_ok = rep.norm_before_converged;
                                after_ok = rep.norm_after_converged;
                                break;
                            }
                            case Method::truncate: {
                                double level = std::sqrt(static_cast<double>(n));
                                auto [m, rep] = truncate_entries(a, level, nopts);
                                row.norm_before = rep.norm_before;
                                row.norm_after = rep.norm_after;
                                row.rows_touched = rep.rows_touched;
                                row.cols_touched = rep.cols_touched;
                                row.entries_changed = rep.entries_changed;
                                before_ok = rep.norm_before_converged;
                                after_ok = rep.norm_after_converged;
                                break;
                            }
                            default:
                                break;
                        }
                    }

                    row.ratio_sqrt_n = row.norm_after / std::sqrt(static_cast<double>(n));
                    if (auto den = bound_denominator(n, eps))
                        row.ratio_bound = row.norm_after / *den;
                    if (!before_ok || !after_ok) row.flags = "norm_unconverged";
                    if (config.include_timing) {
                        auto t1 = std::chrono::steady_clock::now();
                        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

const char* const kCsvHeader =
    "method,n,epsilon,trial,seed,norm_before,norm_after,rows_touched,"
    "cols_touched,entries_changed,ratio_sqrt_n,ratio_bound,flags,wall_ms";

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

}  // namespace

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.method) << ',' << r.n << ',' << fmt(r.epsilon) << ','
            << r.trial << ',' << r.seed << ',' << fmt(r.norm_before) << ','
            << fmt(r.norm_after) << ',' << r.rows_touched << ',' << r.cols_touched
            << ',' << r.entries_changed << ',' << fmt(r.ratio_sqrt_n) << ',';
        if (r.ratio_bound) out << fmt(*r.ratio_bound);
        out << ',' << r.flags << ',';
        if (r.wall_ms) out << fmt(*r.wall_ms);
        out << '\n';
    }
}

std::vector<ResultRow> read_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    if (line != kCsvHeader) throw std::runtime_error("results csv: unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        cells.resize(14);
        ResultRow r;
        r.method = method_from_string(cells[0]);
        r.n = std::stoull(cells[1]);
        r.epsilon = std::stod(cells[2]);
        r.trial = std::stoull(cells[3]);
        r.seed = std::stoull(cells[4]);
        r.norm_before = std::stod(cells[5]);
        r.norm_after = std::stod(cells[6]);
        r.rows_touched = std::stoull(cells[7]);
        r.cols_touched = std::stoull(cells[8]);
        r.entries_changed = std::stoull(cells[9]);
        r.ratio_sqrt_n = std::stod(cells[10]);
        if (!cells[11].empty()) r.ratio_bound = std::stod(cells[11]);
        r.flags = cells[12];
        if (!cells[13].empty()) r.wall_ms = std::stod(cells[13]);
        rows.push_back(std::move(r));
    }
    return rows;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    std::size_t m = values.size() / 2;
    if (values.size() % 2 == 1) return values[m];
    return 0.5 * (values[m - 1] + values[m]);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    std::vector<SummaryRow> out;
    auto key_of = [](const ResultRow& r) {
        return std::tuple(r.method, r.n, r.epsilon);
    };
    std::vector<std::tuple<Method, std::size_t, double>> keys;
    for (const auto& r : rows) {
        auto key = key_of(r);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& key : keys) {
        SummaryRow s{};
        std::tie(s.method, s.n, s.epsilon) = key;
        std::vector<double> rs, rb;
        s.max_rows_touched = s.max_cols_touched = 0;
        for (const auto& r : rows) {
            if (key_of(r) != key) continue;
            rs.push_back(r.ratio_sqrt_n);
            if (r.ratio_bound) rb.push_back(*r.ratio_bound);
            s.max_rows_touched = std::max(s.max_rows_touched, r.rows_touched);
            s.max_cols_touched = std::max(s.max_cols_touched, r.cols_touched);
        }
        s.count = rs.size();
        s.median_ratio_sqrt_n = median(rs);
        s.min_ratio_sqrt_n = *std::min_element(rs.begin(), rs.end());
        s.max_ratio_sqrt_n = *std::max_element(rs.begin(), rs.end());
        if (!rb.empty()) s.median_ratio_bound = median(rb);
        out.push_back(s);
    }
    return out;
}

void write_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "method,n,epsilon,count,median_ratio_sqrt_n,min_ratio_sqrt_n,"
           "max_ratio_sqrt_n,median_ratio_bound,max_rows_touched,max_cols_touched\n";
    for (const auto& s : rows) {
        out << to_string(s.method) << ',' << s.n << ',' << fmt(s.epsilon) << ','
            << s.count << ',' << fmt(s.median_ratio_sqrt_n) << ','
            << fmt(s.min_ratio_sqrt_n) << ',' << fmt(s.max_ratio_sqrt_n) << ',';
        if (s.median_ratio_bound) out << fmt(*s.median_ratio_bound);
        out << ',' << s.max_rows_touched << ',' << s.max_cols_touched << '\n';
    }
}

}  // namespace normreg

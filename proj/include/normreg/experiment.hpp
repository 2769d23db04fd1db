#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "normreg/dist.hpp"
#include "normreg/linalg.hpp"

namespace normreg {

enum class Method { none, topk, threshold, algo1, truncate, degree_trim };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct ExperimentConfig {
    std::vector<std::size_t> sizes;
    std::vector<double> epsilons;
    DistributionSpec distribution;
    std::vector<Method> methods;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::string output;  // CSV path; empty = stdout
    double norm_tol = 1e-6;
    int norm_max_iters = 10000;
    int norm_restarts = 3;
    double threshold_constant = 2.0;   // C in C*sqrt(c_eps n)
    double degree_constant = 20.0;     // C in C*np
    bool include_timing = true;        // wall_ms column; disable for bit-stable CSV

    void validate() const;
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
};

struct ResultRow {
    Method method = Method::none;
    std::size_t n = 0;
    double epsilon = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double norm_before = 0.0;
    double norm_after = 0.0;
    std::size_t rows_touched = 0;
    std::size_t cols_touched = 0;
    std::size_t entries_changed = 0;
    double ratio_sqrt_n = 0.0;                 // norm_after / sqrt(n)
    std::optional<double> ratio_bound;         // norm_after / sqrt(c_eps n lnln n)
    std::string flags;                         // e.g. "norm_unconverged"
    std::optional<double> wall_ms;
};

/// Executes every method x size x epsilon x trial cell; pure function of the
/// config apart from the optional wall_ms column. Cells that fail a method
/// precondition are skipped with a note on the log stream.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config,
                                 std::ostream* log = nullptr);

extern const char* const kCsvHeader;
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_csv(std::istream& in);

struct SummaryRow {
    Method method;
    std::size_t n;
    double epsilon;
    std::size_t count;
    double median_ratio_sqrt_n, min_ratio_sqrt_n, max_ratio_sqrt_n;
    std::optional<double> median_ratio_bound;
    std::size_t max_rows_touched, max_cols_touched;
};

/// Groups by (method, n, epsilon), preserving first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary(const std::vector<SummaryRow>& rows, std::ostream& out);

double median(std::vector<double> values);

}  // namespace normreg

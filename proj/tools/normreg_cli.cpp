#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "normreg/algo1.hpp"
#include "normreg/bern.hpp"
#include "normreg/dist.hpp"
#include "normreg/experiment.hpp"
#include "normreg/levels.hpp"
#include "normreg/linalg.hpp"
#include "normreg/trim.hpp"

namespace {

using namespace normreg;

DistributionSpec make_spec(const std::string& kind, double p, double alpha, bool raw) {
    DistributionSpec spec;
    spec.kind = dist_kind_from_string(kind);
    spec.p = p;
    spec.alpha = alpha;
    spec.normalize = !raw;
    spec.validate();
    return spec;
}

DenseMatrix load_matrix(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        return read_matrix_csv(in);
    }
    return read_matrix_binary_file(path);
}

void save_matrix(const DenseMatrix& a, const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path);
        write_matrix_csv(a, out);
        return;
    }
    write_matrix_binary_file(a, path);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-norm regularization of heavy-tailed random matrices"};
    app.require_subcommand(1);

    std::string kind = "gaussian", in_path, out_path, report_path, config_path;
    double p = 0.5, alpha = 3.0, eps = 1.0 / 6.0, threshold = 0.0, level = 0.0, L = 10.0;
    double tol = 1e-8, C1 = 0.0, C2 = 0.0;
    bool raw = false, use_oracle = false, signed_values = false;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    int max_iters = 10000;

    auto* gen = app.add_subcommand("gen", "Sample a random matrix");
    gen->add_option("--kind", kind, "gaussian|signed_bernoulli|symmetric_pareto");
    gen->add_option("--p", p, "signed_bernoulli success probability");
    gen->add_option("--alpha", alpha, "pareto tail exponent (> 2)");
    gen->add_flag("--raw", raw, "skip unit-variance normalization");
    gen->add_option("--n", n, "matrix dimension")->required();
    gen->add_option("--seed", seed, "master seed")->required();
    gen->add_option("--out", out_path, "output path (.csv or binary)")->required();

    auto* norm = app.add_subcommand("norm", "Estimate the operator norm");
    norm->add_option("--in", in_path)->required();
    norm->add_option("--tol", tol);
    norm->add_option("--max-iters", max_iters);
    norm->add_flag("--oracle", use_oracle, "use the Jacobi oracle (n <= 64)");

    auto* trim = app.add_subcommand("trim", "Row/column or entry regularization");
    std::string trim_method = "topk";
    trim->add_option("method", trim_method, "topk|threshold|truncate")->required();
    trim->add_option("--in", in_path)->required();
    trim->add_option("--epsilon", eps);
    trim->add_option("--threshold", threshold);
    trim->add_option("--level", level);
    trim->add_option("--out", out_path);
    trim->add_option("--report", report_path);

    auto* algo = app.add_subcommand("algo1", "Submatrix-localizing regularization");
    std::optional<double> c_eps_override;
    algo->add_option("--in", in_path)->required();
    algo->add_option("--epsilon", eps);
    algo->add_option("--c-eps", c_eps_override, "override c_epsilon");
    algo->add_option("--out", out_path);
    algo->add_option("--report", report_path);

    auto* bern = app.add_subcommand("bern", "Sparse Bernoulli machinery");
    std::string bern_op = "sample";
    bern->add_option("op", bern_op, "sample|trim|weightcut|discrepancy")->required();
    bern->add_option("--n", n);
    bern->add_option("--p", p);
    bern->add_flag("--signed", signed_values);
    bern->add_option("--seed", seed);
    bern->add_option("--in", in_path);
    bern->add_option("--out", out_path);
    bern->add_option("--threshold", threshold);
    bern->add_option("--L", L);
    bern->add_option("--C1", C1);
    bern->add_option("--C2", C2);

    auto* sweep = app.add_subcommand("sweep", "Run an experiment config");
    sweep->add_option("--config", config_path)->required();
    sweep->add_option("--out", out_path, "CSV path override");

    auto* summ = app.add_subcommand("summarize", "Summarize a results CSV");
    summ->add_option("--in", in_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto spec = make_spec(kind, p, alpha, raw);
            RngStream rng(derive_seed(seed, 0, "matrix"));
            save_matrix(sample_matrix(spec, n, rng), out_path);
        } else if (norm->parsed()) {
            DenseMatrix a = load_matrix(in_path);
            if (use_oracle) {
                std::cout << operator_norm_oracle(a) << '\n';
            } else {
                NormOptions opts;
                opts.tol = tol;
                opts.max_iters = max_iters;
                auto est = operator_norm(a, opts);
                std::cout << est.value << (est.converged ? "" : " (unconverged)") << '\n';
            }
        } else if (trim->parsed()) {
            DenseMatrix a = load_matrix(in_path);
            std::pair<DenseMatrix, RegularizationReport> res;
            if (trim_method == "topk") {
                res = trim_topk_rows_cols(a, eps);
            } else if (trim_method == "threshold") {
                if (threshold <= 0.0)
                    threshold = 2.0 * std::sqrt(c_epsilon(eps) * static_cast<double>(a.n_rows));
                res = trim_threshold_rows_cols(a, threshold);
            } else if (trim_method == "truncate") {
                if (level <= 0.0) level = std::sqrt(static_cast<double>(a.n_rows));
                res = truncate_entries(a, level);
            } else {
                throw std::invalid_argument("unknown trim method: " + trim_method);
            }
            if (!out_path.empty()) save_matrix(res.first, out_path);
            emit(res.second.to_json(), report_path);
        } else if (algo->parsed()) {
            DenseMatrix a = load_matrix(in_path);
            auto [m, rep] = run_algorithm1(a, eps, c_eps_override);
            if (!out_path.empty()) save_matrix(m, out_path);
            if (report_path.empty()) {
                std::cout << "epsilon " << rep.epsilon << "  c_eps " << rep.c_eps
                          << "  l_max " << rep.l_max << '\n'
                          << "step1 entries " << rep.step1_entries.size() << '\n'
                          << "|J| " << rep.J.size() << "  |J_hat| " << rep.J_hat.size() << '\n'
                          << "|I| " << rep.I.size() << "  |I_hat| " << rep.I_hat.size() << '\n'
                          << "norm " << rep.norm_before << " -> " << rep.norm_after << '\n';
            } else {
                emit(rep.to_json(), report_path);
            }
        } else if (bern->parsed()) {
            if (bern_op == "sample") {
                if (n == 0) throw std::invalid_argument("bern sample: --n required");
                RngStream rng(derive_seed(seed, 0, "bernoulli"));
                auto b = sample_bernoulli(n, p, signed_values, rng);
                if (out_path.empty()) {
                    write_pattern(b, std::cout);
                } else {
                    std::ofstream out(out_path);
                    write_pattern(b, out);
                }
            } else {
                std::ifstream in(in_path);
                if (!in) throw std::runtime_error("cannot open " + in_path);
                auto b = read_pattern(in);
                if (bern_op == "trim") {
                    if (threshold <= 0.0) threshold = 20.0 * static_cast<double>(b.n) * b.p;
                    auto [t, rep] = degree_trim(b, threshold);
                    if (!out_path.empty()) {
                        std::ofstream out(out_path);
                        write_pattern(t, out);
                    }
                    std::cout << rep.to_json() << '\n';
                } else if (bern_op == "weightcut") {
                    auto cut = weight_column_cut(b, b.p, L);
                    std::cout << "|J| " << cut.J.size() << '\n';
                    for (std::size_t j : cut.J) std::cout << j << '\n';
                } else if (bern_op == "discrepancy") {
                    if (C1 > 0.0 || C2 > 0.0) {
                        auto res = discrepancy_check(b, b.p, C1, C2);
                        std::cout << (res.all_pairs_ok ? "ok" : "violated")
                                  << "  worst_margin " << res.worst_margin
                                  << "  S " << res.worst_S << "  T " << res.worst_T
                                  << "  e " << res.worst_e << '\n';
                    } else {
                        auto [c1, c2] = discrepancy_min_constants(b, b.p);
                        std::cout << "C1_min " << c1 << "  C2_min " << c2 << '\n';
                    }
                } else {
                    throw std::invalid_argument("unknown bern op: " + bern_op);
                }
            }
        } else if (sweep->parsed()) {
            auto config = ExperimentConfig::from_json_file(config_path);
            if (!out_path.empty()) config.output = out_path;
            auto rows = run_sweep(config, &std::cerr);
            if (config.output.empty()) {
                write_csv(rows, std::cout);
            } else {
                std::ofstream out(config.output);
                if (!out) throw std::runtime_error("cannot open " + config.output);
                write_csv(rows, out);
            }
        } else if (summ->parsed()) {
            std::ifstream in(in_path);
            if (!in) throw std::runtime_error("cannot open " + in_path);
            auto rows = read_csv(in);
            write_summary(summarize(rows), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

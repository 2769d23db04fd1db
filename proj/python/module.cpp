#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "normreg/algo1.hpp"
#include "normreg/bern.hpp"
#include "normreg/dist.hpp"
#include "normreg/levels.hpp"
#include "normreg/linalg.hpp"
#include "normreg/trim.hpp"

namespace py = pybind11;
using namespace normreg;

namespace {

DenseMatrix from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
    DenseMatrix a(static_cast<std::size_t>(arr.shape(0)),
                  static_cast<std::size_t>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + a.size(), a.data.begin());
    return a;
}

py::array_t<double> to_array(const DenseMatrix& a) {
    py::array_t<double> arr({a.n_rows, a.n_cols});
    std::copy(a.data.begin(), a.data.end(), arr.mutable_data());
    return arr;
}

DistributionSpec make_spec(const std::string& kind, double p, double alpha, bool normalize) {
    DistributionSpec spec{dist_kind_from_string(kind), p, alpha, normalize};
    spec.validate();
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectral-norm regularization of heavy-tailed random matrices";

    m.def(
        "sample",
        [](const std::string& kind, std::size_t n, std::uint64_t seed, double p,
           double alpha, bool normalize) {
            auto spec = make_spec(kind, p, alpha, normalize);
            RngStream rng(seed);
            return to_array(sample_matrix(spec, n, rng));
        },
        py::arg("kind"), py::arg("n"), py::arg("seed"), py::arg("p") = 0.5,
        py::arg("alpha") = 3.0, py::arg("normalize") = true,
        "Sample an n x n matrix with i.i.d. entries "
        "(kind: gaussian | signed_bernoulli | symmetric_pareto).");

    m.def(
        "operator_norm",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> arr,
           double tol, int max_iters, int restarts) {
            NormOptions opts;
            opts.tol = tol;
            opts.max_iters = max_iters;
            opts.restarts = restarts;
            auto est = operator_norm(from_array(arr), opts);
            return py::make_tuple(est.value, est.converged, est.iterations);
        },
        py::arg("a"), py::arg("tol") = 1e-8, py::arg("max_iters") = 10000,
        py::arg("restarts") = 3,
        "Largest singular value by power iteration; returns (value, converged, iterations).");

    m.def("c_epsilon", &c_epsilon, py::arg("epsilon"));

    m.def(
        "trim_topk",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> arr, double epsilon) {
            auto [out, rep] = trim_topk_rows_cols(from_array(arr), epsilon);
            return py::make_tuple(to_array(out), rep.to_json());
        },
        py::arg("a"), py::arg("epsilon"),
        "Zero the ceil(eps*n) heaviest rows and columns; returns (matrix, report_json).");

    m.def(
        "trim_threshold",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> arr, double threshold) {
            auto [out, rep] = trim_threshold_rows_cols(from_array(arr), threshold);
            return py::make_tuple(to_array(out), rep.to_json());
        },
        py::arg("a"), py::arg("threshold"));

    m.def(
        "truncate",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> arr, double level) {
            auto [out, rep] = truncate_entries(from_array(arr), level);
            return py::make_tuple(to_array(out), rep.to_json());
        },
        py::arg("a"), py::arg("level"));

    m.def(
        "algorithm1",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> arr, double epsilon) {
            auto [out, rep] = run_algorithm1(from_array(arr), epsilon);
            return py::make_tuple(to_array(out), rep.to_json());
        },
        py::arg("a"), py::arg("epsilon"),
        "Full five-step local regularization; returns (matrix, report_json).");

    m.def(
        "sample_bernoulli",
        [](std::size_t n, double p, bool make_signed, std::uint64_t seed) {
            RngStream rng(seed);
            auto b = sample_bernoulli(n, p, make_signed, rng);
            return py::make_tuple(b.rows, b.cols, b.values);
        },
        py::arg("n"), py::arg("p"), py::arg("signed") = false, py::arg("seed") = 0,
        "Sparse Bernoulli pattern; returns (rows, cols, values).");
}

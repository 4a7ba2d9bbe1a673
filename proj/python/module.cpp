#include "ctlab/cli.hpp"
#include "ctlab/coarse.hpp"
#include "ctlab/error.hpp"
#include "ctlab/kleinian.hpp"
#include "ctlab/lamination.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ctlab;

namespace {

coarse::MetricGraph make_graph(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
    std::vector<coarse::Edge> out;
    out.reserve(edges.size());
    for (const auto& [u, v, w] : edges) out.push_back({u, v, w});
    return coarse::MetricGraph(n, std::move(out));
}

coarse::SubsetFamily make_family(const std::vector<std::vector<std::size_t>>& subsets) {
    coarse::SubsetFamily f;
    f.subsets = subsets;
    return f;
}

}  // namespace

PYBIND11_MODULE(_ctlab, m) {
    m.doc() = "Cannon-Thurston maps, laminations and ladders for punctured-torus bundles.";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"ctlab"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line; returns (exit code, stdout, stderr).");

    m.def(
        "solve_representation",
        [](long long p, long long q, long long r, long long t) {
            const words::Monodromy mono(p, q, r, t);
            const auto rep = kleinian::solve_fiber_representation(mono);
            py::dict d;
            d["traces"] = py::make_tuple(rep.traces.x, rep.traces.y, rep.traces.z);
            d["a"] = py::make_tuple(rep.a.a(), rep.a.b(), rep.a.c(), rep.a.d());
            d["b"] = py::make_tuple(rep.b.a(), rep.b.b(), rep.b.c(), rep.b.d());
            d["commutator_residual"] = rep.commutator_residual;
            d["conjugacy_residual"] = kleinian::verify_monodromy_conjugacy(rep, mono);
            return d;
        },
        py::arg("p") = 2, py::arg("q") = 1, py::arg("r") = 1, py::arg("t") = 1);

    m.def("stable_slope", [](long long p, long long q, long long r, long long t) {
        return lamination::stable_slope(words::Monodromy(p, q, r, t)).to_double();
    });

    m.def(
        "electric_distances",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
           const std::vector<std::vector<std::size_t>>& subsets) {
            const auto e = coarse::electrocute(make_graph(n, edges), make_family(subsets));
            std::vector<std::vector<double>> out;
            for (std::size_t u = 0; u < n; ++u) {
                auto d = coarse::distances_from(e.graph(), u);
                d.resize(n);
                out.push_back(std::move(d));
            }
            return out;
        },
        py::arg("n"), py::arg("edges"), py::arg("subsets"));

    m.def(
        "four_point_delta",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges, std::size_t samples,
           std::uint64_t seed) {
            const auto g = make_graph(n, edges);
            return samples == 0 ? coarse::four_point_delta(g).delta : coarse::four_point_delta(g, samples, seed).delta;
        },
        py::arg("n"), py::arg("edges"), py::arg("samples") = 0, py::arg("seed") = 1);

    m.def(
        "tracking_constant",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
           const std::vector<std::vector<std::size_t>>& subsets, std::size_t u, std::size_t v) {
            return coarse::tracking_constant(make_graph(n, edges), make_family(subsets), u, v);
        },
        py::arg("n"), py::arg("edges"), py::arg("subsets"), py::arg("u"), py::arg("v"));

    m.def(
        "verify_leaves_json",
        [](const std::string& monodromy, std::size_t leaves, std::size_t depth, std::size_t compare_depth, double tol,
           double ratio, std::uint64_t seed) {
            const cli::LeafRunConfig c{monodromy, leaves, depth, compare_depth, tol, ratio, seed};
            return cli::verify_leaves_report(c).dump();
        },
        py::arg("monodromy") = "2,1,1,1", py::arg("leaves") = 50, py::arg("depth") = 30, py::arg("compare_depth") = 10,
        py::arg("tol") = 1e-3, py::arg("ratio") = 10.0, py::arg("seed") = 1);

    m.def(
        "ladder_audit_json",
        [](const std::string& spec_text) {
            return cli::ladder_audit_report(ladder::SplitSpec::parse_text(spec_text)).dump();
        },
        py::arg("spec_text"));
}

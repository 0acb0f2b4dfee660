#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fracstef/cli.hpp"
#include "fracstef/resolvent.hpp"
#include "fracstef/stefan.hpp"

namespace py = pybind11;
using namespace fracstef;

namespace {

GridFunction on_grid(const std::vector<double>& v) {
    if (v.size() < 3) throw ConfigError("need at least 3 samples");
    return GridFunction(Grid(v.size()), v);
}

std::vector<double> values(const GridFunction& f) {
    return {f.values().begin(), f.values().end()};
}

py::dict solution_dict(const StefanSolution& s) {
    py::dict d;
    d["t"] = s.front.times;
    d["s"] = s.front.s;
    d["sdot"] = s.front.sdot;
    d["flux"] = s.field.front_flux;
    d["integral_residual"] = s.integral_residual;
    d["iterations"] = s.iterations;
    d["residual_history"] = s.residual_history;
    d["windows"] = s.windows.size();
    d["max_principle_ok"] = s.field.diagnostics.max_principle_ok;
    d["bound_ok"] = s.field.diagnostics.bound_ok;
    return d;
}

}  // namespace

PYBIND11_MODULE(_fracstef, m) {
    m.doc() = "Space-fractional Stefan problem solver";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<SingularResolventError>(m, "SingularResolventError", base.ptr());
    py::register_exception<StepError>(m, "StepError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    m.def("gamma", &fracstef::gamma, py::arg("x"));
    m.def("mittag_leffler", py::overload_cast<double, double, double>(&mittag_leffler), py::arg("a"), py::arg("b"),
          py::arg("z"));

    m.def(
        "frac_integral", [](const std::vector<double>& f, double order) { return values(frac_integral(on_grid(f), order)); },
        py::arg("f"), py::arg("order"), "I^order of samples of f on a uniform grid over [0, 1].");
    m.def(
        "caputo", [](const std::vector<double>& f, double alpha) { return values(caputo(on_grid(f), FracOrder(alpha))); },
        py::arg("f"), py::arg("alpha"));
    m.def(
        "rl_deriv",
        [](const std::vector<double>& f, double alpha) { return values(rl_deriv(on_grid(f), FracOrder(alpha)).values); },
        py::arg("f"), py::arg("alpha"));
    m.def(
        "operator_matrix",
        [](double alpha, std::size_t n) { return assemble_operator(FracOrder(alpha), Grid(n)).full(); },
        py::arg("alpha"), py::arg("n"), "Rows for interior nodes 1..n-2, columns for all n nodes.");

    m.def(
        "resolvent_solution",
        [](double alpha, double lam, const std::vector<double>& g) {
            return values(resolvent_solution(ResolventProblem(FracOrder(alpha), lam, on_grid(g))));
        },
        py::arg("alpha"), py::arg("lam"), py::arg("g"));
    m.def(
        "resolvent_residual",
        [](double alpha, double lam, const std::vector<double>& g, const std::vector<double>& u) {
            return resolvent_residual(ResolventProblem(FracOrder(alpha), lam, on_grid(g)), on_grid(u));
        },
        py::arg("alpha"), py::arg("lam"), py::arg("g"), py::arg("u"));

    py::class_<StefanParams>(m, "StefanParams")
        .def(py::init([](double alpha, double b, double M, double T, std::size_t n, double dt) {
                 StefanParams p;
                 p.alpha = alpha;
                 p.b = b;
                 p.M = M;
                 p.T = T;
                 p.n = n;
                 p.dt = dt;
                 p.validate();
                 return p;
             }),
             py::arg("alpha") = 0.75, py::arg("b") = 1.0, py::arg("M") = 1.0, py::arg("T") = 0.5, py::arg("n") = 129,
             py::arg("dt") = 1e-3)
        .def_readwrite("alpha", &StefanParams::alpha)
        .def_readwrite("b", &StefanParams::b)
        .def_readwrite("M", &StefanParams::M)
        .def_readwrite("T", &StefanParams::T)
        .def_readwrite("n", &StefanParams::n)
        .def_readwrite("dt", &StefanParams::dt)
        .def("steps", &StefanParams::steps);

    m.def(
        "scaled_cap",
        [](std::size_t n, double alpha, double b, double M, double theta) {
            return values(scaled_cap(Grid(n), alpha, b, M, theta));
        },
        py::arg("n"), py::arg("alpha"), py::arg("b"), py::arg("M"), py::arg("theta") = 1.0);

    m.def(
        "solve_stefan",
        [](const StefanParams& p, const std::vector<double>& u0, double tol_rel, int max_iters, int windows) {
            StefanOptions o;
            o.tol_rel = tol_rel;
            o.max_iters = max_iters;
            o.windows = windows;
            return solution_dict(solve_stefan(p, on_grid(u0), o));
        },
        py::arg("params"), py::arg("u0"), py::arg("tol_rel") = 1e-8, py::arg("max_iters") = 50, py::arg("windows") = 0);

    m.def("gronwall_tolerance", &gronwall_tolerance, py::arg("alpha"), py::arg("b2"), py::arg("M"), py::arg("T"),
          py::arg("delta"));

    m.def(
        "run_config",
        [](const std::string& text, std::optional<std::filesystem::path> out) {
            const RunReport r = run(parse_config(text), out);
            py::dict d;
            d["exit_code"] = r.exit_code;
            d["error_class"] = r.error_class;
            d["error_message"] = r.error_message;
            py::dict flags;
            for (const auto& f : r.flags) flags[py::str(f.name)] = f.pass;
            d["flags"] = flags;
            py::dict vals;
            for (const auto& [k, v] : r.values) vals[py::str(k)] = v;
            d["values"] = vals;
            return d;
        },
        py::arg("text"), py::arg("out") = py::none(), "Run a key = value configuration as the CLI would.");
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "telegraph/cli.hpp"
#include "telegraph/error.hpp"
#include "telegraph/harness.hpp"
#include "telegraph/ilt.hpp"
#include "telegraph/model.hpp"
#include "telegraph/pde_solver.hpp"
#include "telegraph/simulator.hpp"
#include "telegraph/spectral.hpp"
#include "telegraph/transform_solver.hpp"

namespace py = pybind11;
using namespace telegraph;
using cd = std::complex<double>;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Telegraph process workbench (C++ core)";

    py::register_exception<Error>(m, "TelegraphError", PyExc_RuntimeError);

    py::class_<ProcessParams>(m, "ProcessParams")
        .def(py::init([](double mu0, double mu1, double lambda0, double lambda1, double B) {
                 return ProcessParams{mu0, mu1, lambda0, lambda1, B};
             }),
             py::arg("mu0"), py::arg("mu1"), py::arg("lambda0"), py::arg("lambda1"), py::arg("B"))
        .def_readwrite("mu0", &ProcessParams::mu0)
        .def_readwrite("mu1", &ProcessParams::mu1)
        .def_readwrite("lambda0", &ProcessParams::lambda0)
        .def_readwrite("lambda1", &ProcessParams::lambda1)
        .def_readwrite("B", &ProcessParams::B)
        .def("__repr__", [](const ProcessParams& p) {
            return "ProcessParams(mu0=" + std::to_string(p.mu0) + ", mu1=" + std::to_string(p.mu1) +
                   ", lambda0=" + std::to_string(p.lambda0) + ", lambda1=" + std::to_string(p.lambda1) +
                   ", B=" + std::to_string(p.B) + ")";
        });

    py::enum_<Regime>(m, "Regime").value("Down", Regime::Down).value("Up", Regime::Up);

    m.def(
        "validate_params",
        [](double mu0, double mu1, double l0, double l1, double B, bool strict) {
            return validate_params(mu0, mu1, l0, l1, B, strict ? Validation::Strict : Validation::Relaxed);
        },
        py::arg("mu0"), py::arg("mu1"), py::arg("lambda0"), py::arg("lambda1"), py::arg("B"),
        py::arg("strict") = true);

    py::class_<Atom>(m, "Atom")
        .def(py::init([](double w, double a, Regime s) { return Atom{w, a, s}; }), py::arg("weight"),
             py::arg("position"), py::arg("regime"))
        .def_readonly("weight", &Atom::weight)
        .def_readonly("position", &Atom::position)
        .def_readonly("regime", &Atom::regime);

    py::class_<InitialCondition>(m, "InitialCondition")
        .def(py::init<std::vector<Atom>, double>(), py::arg("atoms"), py::arg("B"))
        .def_static("point", &InitialCondition::point, py::arg("position"), py::arg("regime"), py::arg("B"))
        .def_property_readonly("atoms", [](const InitialCondition& i) {
            return std::vector<Atom>(i.atoms().begin(), i.atoms().end());
        });

    m.def("initial_ccdf", &initial_ccdf, py::arg("init"), py::arg("regime"), py::arg("A"));
    m.def("initial_finite_laplace", &initial_finite_laplace, py::arg("init"), py::arg("regime"), py::arg("xi"));

    py::class_<SpectralRoots<double>>(m, "SpectralRoots")
        .def_readonly("xi", &SpectralRoots<double>::xi)
        .def_readonly("m", &SpectralRoots<double>::m)
        .def_readonly("n", &SpectralRoots<double>::n)
        .def_readonly("q", &SpectralRoots<double>::q);
    py::class_<XiPair<double>>(m, "XiPair")
        .def_readonly("m", &XiPair<double>::m)
        .def_readonly("xi1", &XiPair<double>::xi1)
        .def_readonly("xi2", &XiPair<double>::xi2)
        .def_readonly("r", &XiPair<double>::r)
        .def_readonly("U", &XiPair<double>::U)
        .def_readonly("W", &XiPair<double>::W);
    m.def("roots", [](const ProcessParams& p, cd xi) { return roots<double>(validate_params(p, Validation::Strict), xi); },
          py::arg("params"), py::arg("xi"));
    m.def("xi_pair", [](const ProcessParams& p, cd mm) { return xi_pair<double>(validate_params(p, Validation::Strict), mm); },
          py::arg("params"), py::arg("m"));

    py::enum_<IltMethod>(m, "IltMethod")
        .value("Gaver", IltMethod::Gaver)
        .value("Talbot", IltMethod::Talbot)
        .value("Euler", IltMethod::Euler);
    py::class_<IltConfig>(m, "IltConfig")
        .def(py::init([](IltMethod method, int terms, int bits) { return IltConfig{method, terms, bits, std::nullopt, 18}; }),
             py::arg("method") = IltMethod::Talbot, py::arg("terms") = 32, py::arg("precision_bits") = 64)
        .def_readwrite("method", &IltConfig::method)
        .def_readwrite("terms", &IltConfig::terms)
        .def_readwrite("precision_bits", &IltConfig::precision_bits)
        .def_readwrite("cross_check", &IltConfig::cross_check)
        .def_readwrite("cross_check_terms", &IltConfig::cross_check_terms);
    m.def(
        "invert",
        [](const std::function<cd(cd)>& F, const std::vector<double>& times, const IltConfig& cfg) {
            const LaplaceTransform G = [&F](std::complex<long double> p) {
                const cd v = F(cd(static_cast<double>(p.real()), static_cast<double>(p.imag())));
                return std::complex<long double>(v.real(), v.imag());
            };
            const IltResult r = invert(G, times, cfg);
            return py::make_tuple(r.values, r.errors);
        },
        py::arg("F"), py::arg("times"), py::arg("cfg") = IltConfig{},
        "Returns (values, error_estimates). F is called with complex p.");

    py::class_<BoundaryTransforms>(m, "BoundaryTransforms")
        .def_readonly("m", &BoundaryTransforms::m)
        .def_readonly("psi_hat", &BoundaryTransforms::psi_hat)
        .def_readonly("omega_hat", &BoundaryTransforms::omega_hat)
        .def_readonly("phi_hat", &BoundaryTransforms::phi_hat)
        .def_readonly("psi0", &BoundaryTransforms::psi0)
        .def_readonly("residual", &BoundaryTransforms::residual)
        .def_readonly("condition", &BoundaryTransforms::condition);
    m.def("solve_boundary_transforms", &solve_boundary_transforms, py::arg("params"), py::arg("init"), py::arg("m"));

    py::class_<BoundaryValues>(m, "BoundaryValues")
        .def_readonly("phi", &BoundaryValues::phi)
        .def_readonly("psi", &BoundaryValues::psi)
        .def_readonly("omega", &BoundaryValues::omega);
    py::class_<FieldGrid>(m, "FieldGrid")
        .def_readonly("times", &FieldGrid::times)
        .def_readonly("positions", &FieldGrid::positions)
        .def_readonly("F0", &FieldGrid::F0)
        .def_readonly("F1", &FieldGrid::F1)
        .def_readonly("F0_err", &FieldGrid::F0_err)
        .def_readonly("F1_err", &FieldGrid::F1_err)
        .def_readonly("survival", &FieldGrid::survival)
        .def_readonly("boundary", &FieldGrid::boundary)
        .def_readonly("meta", &FieldGrid::meta)
        .def_property_readonly("source", [](const FieldGrid& g) { return std::string(to_string(g.source)); });
    py::class_<BoundarySeries>(m, "BoundarySeries")
        .def(py::init<>())
        .def_readwrite("times", &BoundarySeries::times)
        .def_readwrite("phi", &BoundarySeries::phi)
        .def_readwrite("psi", &BoundarySeries::psi)
        .def_readwrite("omega", &BoundarySeries::omega)
        .def_readwrite("phi_err", &BoundarySeries::phi_err)
        .def_readwrite("psi_err", &BoundarySeries::psi_err)
        .def_readwrite("omega_err", &BoundarySeries::omega_err)
        .def_readonly("clamped", &BoundarySeries::clamped);

    m.def(
        "estimate_field",
        [](const ProcessParams& p, const InitialCondition& init, const std::vector<double>& times,
           const std::vector<double>& positions, std::size_t n_paths, std::uint64_t seed, unsigned workers) {
            py::gil_scoped_release release;
            return estimate_field(p, init, times, positions, {n_paths, seed, workers});
        },
        py::arg("params"), py::arg("init"), py::arg("times"), py::arg("positions"), py::arg("n_paths") = 100000,
        py::arg("seed") = 42, py::arg("workers") = 1);
    m.def(
        "estimate_boundary_series",
        [](const ProcessParams& p, const InitialCondition& init, const std::vector<double>& times, std::size_t n_paths,
           std::uint64_t seed, unsigned workers) {
            py::gil_scoped_release release;
            return estimate_boundary_series(p, init, times, {n_paths, seed, workers});
        },
        py::arg("params"), py::arg("init"), py::arg("times"), py::arg("n_paths") = 100000, py::arg("seed") = 42,
        py::arg("workers") = 1);
    py::class_<TransformEstimate>(m, "TransformEstimate")
        .def_readonly("m", &TransformEstimate::m)
        .def_readonly("psi_hat", &TransformEstimate::psi_hat)
        .def_readonly("omega_hat", &TransformEstimate::omega_hat)
        .def_readonly("phi_hat", &TransformEstimate::phi_hat)
        .def_readonly("psi_err", &TransformEstimate::psi_err)
        .def_readonly("omega_err", &TransformEstimate::omega_err)
        .def_readonly("phi_err", &TransformEstimate::phi_err);
    m.def(
        "estimate_transform",
        [](const ProcessParams& p, const InitialCondition& init, const std::vector<double>& ms, double horizon,
           std::size_t n_paths, std::uint64_t seed, unsigned workers) {
            py::gil_scoped_release release;
            return estimate_transform(p, init, ms, horizon, {n_paths, seed, workers});
        },
        py::arg("params"), py::arg("init"), py::arg("m_values"), py::arg("horizon"), py::arg("n_paths") = 100000,
        py::arg("seed") = 42, py::arg("workers") = 1);

    m.def(
        "solve_pde",
        [](const ProcessParams& p, const InitialCondition& init, int nx, double cfl, double t_max,
           const std::vector<double>& snapshots) {
            py::gil_scoped_release release;
            return solve_pde(p, init, PdeConfig{nx, cfl, t_max, snapshots});
        },
        py::arg("params"), py::arg("init"), py::arg("nx") = 1000, py::arg("cfl") = 1.0, py::arg("t_max") = 1.0,
        py::arg("snapshot_times") = std::vector<double>{});

    m.def("recover_boundary_series", &recover_boundary_series, py::arg("params"), py::arg("init"), py::arg("times"),
          py::arg("cfg") = IltConfig{IltMethod::Euler, 32, 64, std::nullopt, 18});
    m.def(
        "eval_L",
        [](const ProcessParams& p, const InitialCondition& init, double t, cd xi, const BoundarySeries& s) {
            const LPair L = eval_L(p, init, t, xi, s);
            return py::make_tuple(L.L0, L.L1);
        },
        py::arg("params"), py::arg("init"), py::arg("t"), py::arg("xi"), py::arg("series"));
    m.def(
        "reconstruct_field",
        [](const ProcessParams& p, const InitialCondition& init, double t, const std::vector<double>& positions,
           const BoundarySeries& s, int terms) { return reconstruct_field(p, init, t, positions, s, terms); },
        py::arg("params"), py::arg("init"), py::arg("t"), py::arg("positions"), py::arg("series"),
        py::arg("terms") = 256);

    py::class_<Metric>(m, "Metric")
        .def_readonly("name", &Metric::name)
        .def_readonly("value", &Metric::value)
        .def_readonly("tolerance", &Metric::tolerance)
        .def_readonly("passed", &Metric::pass);
    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("pairs", &ComparisonReport::pairs)
        .def_readonly("metrics", &ComparisonReport::metrics)
        .def_readonly("passed", &ComparisonReport::pass)
        .def("metric", [](const ComparisonReport& r, const std::string& name) {
            const Metric* mt = r.find(name);
            if (!mt) throw py::key_error(name);
            return mt->value;
        });
    m.def(
        "compare_fields",
        [](const FieldGrid& a, const FieldGrid& b, std::optional<double> max_abs, std::optional<double> trimmed,
           std::optional<double> excess) {
            CompareTolerances tol;
            tol.max_abs = max_abs;
            tol.trimmed_max = trimmed;
            tol.trimmed_excess = excess;
            return compare_fields(a, b, tol);
        },
        py::arg("a"), py::arg("b"), py::arg("max_abs") = py::none(), py::arg("trimmed_max") = py::none(),
        py::arg("trimmed_excess") = py::none());
    m.def(
        "check_ode_relation",
        [](const BoundarySeries& s, const ProcessParams& p) {
            const OdeReport r = check_ode_relation(s, p);
            return py::dict(py::arg("fraction_within") = r.fraction_within,
                            py::arg("max_abs_residual") = r.max_abs_residual, py::arg("passed") = r.pass);
        },
        py::arg("series"), py::arg("params"));

    m.def("run_cli", [](const std::vector<std::string>& args) { return run(args); }, py::arg("args"),
          "Runs the command-line tool in-process and returns its exit status.");
}

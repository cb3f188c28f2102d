#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cellflux/config.hpp"
#include "cellflux/linear_periodic.hpp"
#include "cellflux/trajectory.hpp"

namespace py = pybind11;
using namespace cellflux;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Periodic solutions of the cell-volume flux system by monotone iteration";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DomainError>(m, "ModelDomainError");
    py::register_exception<PeriodicityViolation>(m, "PeriodicityViolation");
    py::register_exception<NearSingular>(m, "NearSingular");
    py::register_exception<ConstructionError>(m, "ConstructionError");
    py::register_exception<ConditionViolated>(m, "ConditionViolated");
    py::register_exception<MonotonicityBreach>(m, "MonotonicityBreach");
    py::register_exception<SingularityApproached>(m, "SingularityApproached");
    py::register_exception<NonConvergence>(m, "NonConvergenceError");

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<double, std::vector<double>>(), py::arg("period"), py::arg("values"))
        .def_property_readonly("period", &GridFunction::period)
        .def_property_readonly("values", [](const GridFunction& g) { return g.values(); })
        .def("__call__", &GridFunction::operator())
        .def("max", &GridFunction::max)
        .def("min", &GridFunction::min)
        .def("sup_norm", &GridFunction::sup_norm);

    py::class_<PeriodicForcing>(m, "PeriodicForcing")
        .def_static("constant", &PeriodicForcing::constant, py::arg("period"), py::arg("value"))
        .def_static("sinusoid", &PeriodicForcing::sinusoid, py::arg("period"), py::arg("offset"),
                    py::arg("amplitude"), py::arg("omega"), py::arg("phase") = 0.0)
        .def_static("raised_cos2", &PeriodicForcing::raised_cos2, py::arg("period"),
                    py::arg("offset"), py::arg("amplitude"), py::arg("omega"),
                    py::arg("phase") = 0.0)
        .def_static("harmonic", &PeriodicForcing::harmonic, py::arg("period"),
                    py::arg("cos_coeffs"), py::arg("sin_coeffs"))
        .def_static("table", &PeriodicForcing::table, py::arg("period"), py::arg("values"))
        .def_property_readonly("period", &PeriodicForcing::period)
        .def("__call__", &PeriodicForcing::operator());

    m.def("sample", &sample, py::arg("forcing"), py::arg("n"));
    m.def("integrate_period", &integrate_period);
    m.def("mean_decompose", &mean_decompose, py::arg("forcing"), py::arg("n"));
    m.def("zero_mean_primitive", &zero_mean_primitive, py::arg("tilde"),
          py::arg("tol_mean") = -1.0);
    m.def("solve_linear_periodic",
          py::overload_cast<double, const GridFunction&>(&solve_linear_periodic),
          py::arg("decay"), py::arg("forcing"));
    m.def(
        "scaled_small_a_limit",
        [](const PeriodicForcing& b, std::vector<double> a_seq, int n) {
            return scaled_small_a_limit(b, a_seq, n);
        },
        py::arg("forcing"), py::arg("a_sequence"), py::arg("n") = 2048);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<PeriodicForcing, PeriodicForcing, double, double, double, double>(),
             py::arg("alpha"), py::arg("gamma"), py::arg("beta"), py::arg("sigma"),
             py::arg("epsilon"), py::arg("period"))
        .def_readonly("alpha", &ModelParams::alpha)
        .def_readonly("gamma", &ModelParams::gamma)
        .def_readonly("beta", &ModelParams::beta)
        .def_readonly("sigma", &ModelParams::sigma)
        .def_readonly("epsilon", &ModelParams::epsilon)
        .def_readonly("period", &ModelParams::period);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("grid_n", &SolverConfig::grid_n)
        .def_readwrite("tol_step", &SolverConfig::tol_step)
        .def_readwrite("tol_unique", &SolverConfig::tol_unique)
        .def_readwrite("max_iter", &SolverConfig::max_iter)
        .def_readwrite("M_override", &SolverConfig::M_override)
        .def_readwrite("samples", &SolverConfig::samples);

    py::class_<IterationGaps>(m, "IterationGaps")
        .def_readonly("ascending", &IterationGaps::ascending)
        .def_readonly("descending", &IterationGaps::descending)
        .def_readonly("between", &IterationGaps::between);

    py::class_<IterationReport>(m, "IterationReport")
        .def_readonly("minimal_x", &IterationReport::minimal_x)
        .def_readonly("minimal_y", &IterationReport::minimal_y)
        .def_readonly("maximal_x", &IterationReport::maximal_x)
        .def_readonly("maximal_y", &IterationReport::maximal_y)
        .def_readonly("iterations", &IterationReport::iterations)
        .def_readonly("chain_gaps", &IterationReport::chain_gaps)
        .def_readonly("M_used", &IterationReport::M_used)
        .def_readonly("converged", &IterationReport::converged);

    py::class_<Subsolution>(m, "Subsolution")
        .def_readonly("c_x", &Subsolution::c_x)
        .def_readonly("c_y", &Subsolution::c_y)
        .def_readonly("margin_x", &Subsolution::margin_x)
        .def_readonly("margin_y", &Subsolution::margin_y);

    py::class_<SupersolutionConfig>(m, "SupersolutionConfig")
        .def_readonly("theta", &SupersolutionConfig::theta)
        .def_readonly("m_env", &SupersolutionConfig::m_env);

    py::class_<CellSolveResult>(m, "CellSolveResult")
        .def_readonly("condition", &CellSolveResult::condition)
        .def_readonly("alpha_mean", &CellSolveResult::alpha_mean)
        .def_readonly("gamma_mean", &CellSolveResult::gamma_mean)
        .def_readonly("sub", &CellSolveResult::sub)
        .def_readonly("super_cfg", &CellSolveResult::super_cfg)
        .def_readonly("iteration", &CellSolveResult::iteration)
        .def_readonly("identity_minimal", &CellSolveResult::identity_minimal)
        .def_readonly("identity_maximal", &CellSolveResult::identity_maximal)
        .def_readonly("unique", &CellSolveResult::unique);

    m.def("necessary_condition", &necessary_condition, py::arg("params"), py::arg("n") = 2048);
    m.def("identity_residual", &identity_residual, py::arg("params"), py::arg("y_component"));
    m.def("build_subsolution", &build_subsolution, py::arg("params"), py::arg("n") = 2048);
    m.def("select_theta_m", &select_theta_m, py::arg("params"), py::arg("n") = 2048);
    m.def("solve_cell_model", &solve_cell_model, py::arg("params"),
          py::arg("config") = SolverConfig{});

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("x", &Trajectory::x)
        .def_readonly("y", &Trajectory::y)
        .def_readonly("step", &Trajectory::step)
        .def_readonly("method", &Trajectory::method);

    py::class_<AttractionReport>(m, "AttractionReport")
        .def_readonly("distances", &AttractionReport::distances)
        .def_readonly("ratios", &AttractionReport::ratios)
        .def_readonly("passed", &AttractionReport::pass);

    m.def("integrate", &integrate, py::arg("params"), py::arg("x0"), py::arg("y0"),
          py::arg("step"), py::arg("horizon_periods"), py::arg("y_floor") = 1e-9);
    m.def("attraction_metrics", &attraction_metrics, py::arg("trajectory"),
          py::arg("periodic_x"), py::arg("periodic_y"), py::arg("attraction_tol") = 1e-4);
}

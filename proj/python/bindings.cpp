#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scobb/bench.hpp"
#include "scobb/cutplane.hpp"
#include "scobb/generator.hpp"
#include "scobb/io.hpp"
#include "scobb/oracle.hpp"
#include "scobb/sco.hpp"
#include "scobb/scobb.hpp"

namespace py = pybind11;
using namespace scobb;

namespace {

QcqpInstance make_instance(const QuadForm& objective, const std::vector<QuadForm>& constraints,
                           const Vector& lower, const Vector& upper,
                           const std::vector<std::pair<Vector, double>>& linear) {
  QcqpInstance inst;
  inst.objective = objective;
  inst.constraints = constraints;
  inst.lower = lower;
  inst.upper = upper;
  for (const auto& [a, b] : linear) inst.linear_ineqs.push_back({a, b});
  inst.validate();
  return inst;
}

SolveReport solve_scobb_general(const QcqpInstance& inst, double eps, std::uint64_t max_nodes,
                                int threads) {
  ScobbLimits lim;
  lim.max_nodes = max_nodes;
  lim.threads = threads;
  lim.sco_eps = eps;
  return run_scobb(make_dc(inst), std::nullopt, eps, lim);
}

SolveReport solve_scobb_liquidation(const LiquidationParams& p, double eps,
                                    std::uint64_t max_nodes, int threads) {
  ScobbLimits lim;
  lim.max_nodes = max_nodes;
  lim.threads = threads;
  lim.sco_eps = eps;
  return run_scobb(make_dc(build_qcqp(p)), p, eps, lim);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Global solver for nonconvex QCQP: DC splitting, SCO upper bounds, "
            "McCormick lower bounds, branch-and-bound";

  py::class_<QuadForm>(m, "QuadForm")
      .def(py::init([](const Matrix& Q, const Vector& q, double c) {
             return QuadForm(SymMatrix(Q), q, c);
           }),
           py::arg("Q"), py::arg("q"), py::arg("c") = 0.0)
      .def_property_readonly("Q", [](const QuadForm& f) { return f.Q.mat(); })
      .def_readonly("q", &QuadForm::q)
      .def_readonly("c", &QuadForm::c)
      .def("eval", &QuadForm::eval, py::arg("y"));

  py::class_<QcqpInstance>(m, "QcqpInstance")
      .def(py::init(&make_instance), py::arg("objective"), py::arg("constraints"),
           py::arg("lower"), py::arg("upper"),
           py::arg("linear_ineqs") = std::vector<std::pair<Vector, double>>{})
      .def_readonly("objective", &QcqpInstance::objective)
      .def_readonly("constraints", &QcqpInstance::constraints)
      .def_readonly("lower", &QcqpInstance::lower)
      .def_readonly("upper", &QcqpInstance::upper)
      .def_property_readonly("linear_ineqs",
                             [](const QcqpInstance& q) {
                               std::vector<std::pair<Vector, double>> out;
                               for (const auto& li : q.linear_ineqs) out.emplace_back(li.a, li.b);
                               return out;
                             })
      .def("residuals", [](const QcqpInstance& q, const Vector& y) { return residuals(q, y); })
      .def("is_feasible",
           [](const QcqpInstance& q, const Vector& y, double tol) { return is_feasible(q, y, tol); },
           py::arg("y"), py::arg("tol") = 1e-9)
      .def("dim", &QcqpInstance::dim);

  py::class_<LiquidationParams>(m, "LiquidationParams")
      .def(py::init<>())
      .def_readwrite("m", &LiquidationParams::m)
      .def_readwrite("lam", &LiquidationParams::lambda)
      .def_readwrite("gamma", &LiquidationParams::gamma)
      .def_readwrite("p0", &LiquidationParams::p0)
      .def_readwrite("x0", &LiquidationParams::x0)
      .def_readwrite("e0", &LiquidationParams::e0)
      .def_readwrite("l0", &LiquidationParams::l0)
      .def_readwrite("rho1", &LiquidationParams::rho1)
      .def_readwrite("rho2", &LiquidationParams::rho2)
      .def_readwrite("pi", &LiquidationParams::pi)
      .def_readwrite("delta", &LiquidationParams::delta)
      .def("validate", &LiquidationParams::validate);

  py::class_<ShockCapacity>(m, "ShockCapacity")
      .def_readonly("delta_max", &ShockCapacity::delta_max)
      .def_readonly("closed_form_valid", &ShockCapacity::closed_form_valid)
      .def_readonly("g_star", &ShockCapacity::g_star);

  py::class_<ActivityReport>(m, "ActivityReport")
      .def_readonly("residual", &ActivityReport::residual)
      .def_readonly("leverage", &ActivityReport::leverage)
      .def_readonly("leverage_defined", &ActivityReport::leverage_defined)
      .def_readonly("active", &ActivityReport::active);

  py::class_<AssumptionReport>(m, "AssumptionReport")
      .def_readonly("leverage_crisis", &AssumptionReport::leverage_crisis)
      .def_readonly("half_sale_recovers", &AssumptionReport::half_sale_recovers)
      .def_readonly("slater", &AssumptionReport::slater)
      .def("all", &AssumptionReport::all);

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("incumbent",
                             [](const SolveReport& r) -> std::optional<Vector> {
                               if (!r.has_incumbent) return std::nullopt;
                               return r.incumbent;
                             })
      .def_readonly("upper", &SolveReport::upper)
      .def_readonly("lower", &SolveReport::lower)
      .def_readonly("gap", &SolveReport::gap)
      .def_readonly("nodes_processed", &SolveReport::nodes_processed)
      .def_readonly("relaxations_solved", &SolveReport::relaxations_solved)
      .def_readonly("sco_restarts", &SolveReport::sco_restarts)
      .def_readonly("wall_time_s", &SolveReport::wall_time_s)
      .def_property_readonly("status",
                             [](const SolveReport& r) { return std::string(to_string(r.status.kind)); })
      .def_property_readonly("activity",
                             [](const SolveReport& r) { return r.activity; });

  py::class_<ScoResult>(m, "ScoResult")
      .def_readonly("y", &ScoResult::y)
      .def_readonly("value", &ScoResult::value)
      .def_property_readonly("iterations",
                             [](const ScoResult& r) { return r.trace.iterates.size(); })
      .def_property_readonly("status", [](const ScoResult& r) {
        return std::string(to_string(r.trace.status.kind));
      });

  py::class_<CutPlaneResult>(m, "CutPlaneResult")
      .def_readonly("t1", &CutPlaneResult::t1)
      .def_readonly("t2", &CutPlaneResult::t2)
      .def_readonly("dual_value", &CutPlaneResult::dual_value)
      .def_readonly("feasible_point", &CutPlaneResult::feasible_point)
      .def_readonly("iterations", &CutPlaneResult::iterations)
      .def_readonly("trace", &CutPlaneResult::trace);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("y", &OracleResult::y)
      .def_readonly("value", &OracleResult::value)
      .def_readonly("resolution", &OracleResult::resolution)
      .def_property_readonly("status", [](const OracleResult& r) {
        return std::string(to_string(r.status.kind));
      });

  m.def("spectral_split",
        [](const Matrix& M) {
          const SpectralSplit s = spectral_split(SymMatrix(M));
          return py::make_tuple(s.plus.mat(), s.minus.mat(), s.eigvals);
        },
        py::arg("M"), "PSD pair (plus, minus) with plus - minus == M, plus eigenvalues");
  m.def("spectral_norm", [](const Matrix& M) { return spectral_norm(SymMatrix(M)); }, py::arg("M"));

  m.def("build_qcqp", &build_qcqp, py::arg("params"));
  m.def("expected_equity", &expected_equity, py::arg("params"), py::arg("y"));
  m.def("shock_capacity",
        [](const LiquidationParams& p) { return shock_capacity(p); }, py::arg("params"));
  m.def("check_assumptions", &check_assumptions, py::arg("params"));
  m.def("check_optimality_activity", &check_optimality_activity, py::arg("params"), py::arg("y"),
        py::arg("tol") = 1e-4);

  m.def("generate_instance",
        [](std::uint64_t seed, int m_assets, double pi, double delta_frac, double rho1,
           double rho2, const std::string& regime) {
          GeneratorConfig cfg;
          cfg.seed = seed;
          cfg.m = m_assets;
          cfg.pi = pi;
          cfg.delta_frac = delta_frac;
          cfg.rho1 = rho1;
          cfg.rho2 = rho2;
          cfg.regime = regime_from_string(regime);
          return generate_instance(cfg);
        },
        py::arg("seed") = 1, py::arg("m") = 1, py::arg("pi") = 0.3, py::arg("delta_frac") = 0.8,
        py::arg("rho1") = 18.0, py::arg("rho2") = 18.0, py::arg("regime") = "convex");

  m.def("run_cutplane",
        [](const LiquidationParams& p, double tol, int max_iter, double bound) {
          return run_cutplane(p, tol, max_iter, bound);
        },
        py::arg("params"), py::arg("tol") = 1e-9, py::arg("max_iter") = 200,
        py::arg("bound") = 1e6);

  m.def("run_sco",
        [](const QcqpInstance& inst, const Vector& y0, double eps, int max_iter) {
          return run_sco(make_dc(inst), y0, eps, max_iter);
        },
        py::arg("instance"), py::arg("y0"), py::arg("eps") = 1e-6, py::arg("max_iter") = 100);

  m.def("solve_scobb", &solve_scobb_liquidation, py::arg("params"), py::arg("eps") = 1e-6,
        py::arg("max_nodes") = 1'000'000, py::arg("threads") = 1);
  m.def("solve_scobb", &solve_scobb_general, py::arg("instance"), py::arg("eps") = 1e-6,
        py::arg("max_nodes") = 1'000'000, py::arg("threads") = 1);

  m.def("brute_force_oracle",
        [](const QcqpInstance& inst, double resolution) {
          return brute_force_oracle(inst, resolution);
        },
        py::arg("instance"), py::arg("resolution"));

  m.def("save_instance",
        [](const std::string& path, const LiquidationParams& p) {
          InstanceFile f;
          f.liquidation = p;
          save_instance(path, f);
        },
        py::arg("path"), py::arg("params"));
  m.def("load_instance", [](const std::string& path) {
    const InstanceFile f = load_instance(path);
    return py::make_tuple(f.liquidation, f.general);
  });
}

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcf/gen.hpp"
#include "mcf/oracle.hpp"
#include "mcf/preprocess.hpp"
#include "mcf/solver.hpp"

namespace py = pybind11;
using namespace mcf;

PYBIND11_MODULE(_mcf, m) {
  m.doc() = "min-cost flow via potential-reduction interior point";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<SolverFailure>(m, "SolverFailure");

  py::class_<Arc>(m, "Arc")
      .def(py::init([](int tail, int head) { return Arc{tail, head}; }), py::arg("tail"),
           py::arg("head"))
      .def_readwrite("tail", &Arc::tail)
      .def_readwrite("head", &Arc::head)
      .def("__repr__", [](const Arc& a) {
        return "Arc(" + std::to_string(a.tail) + ", " + std::to_string(a.head) + ")";
      });

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def(py::init<>())
      .def_readwrite("node_count", &ProblemInstance::node_count)
      .def_readwrite("arcs", &ProblemInstance::arcs)
      .def_readwrite("demand", &ProblemInstance::demand)
      .def_readwrite("cost", &ProblemInstance::cost)
      .def_readwrite("capacity", &ProblemInstance::capacity)
      .def_property_readonly("arc_count", &ProblemInstance::arc_count)
      .def("validate", &ProblemInstance::validate);

  m.attr("INFINITE_CAPACITY") = kInfiniteCapacity;

  py::class_<Solution>(m, "Solution")
      .def_property_readonly("status", [](const Solution& s) { return to_string(s.status); })
      .def_readonly("objective", &Solution::objective)
      .def_readonly("flow", &Solution::flow)
      .def_readonly("potential", &Solution::potential);

  py::class_<ComponentStats>(m, "ComponentStats")
      .def_readonly("node_count", &ComponentStats::node_count)
      .def_readonly("arc_count", &ComponentStats::arc_count)
      .def_readonly("aux_arc_count", &ComponentStats::aux_arc_count)
      .def_readonly("initial_potential", &ComponentStats::initial_potential)
      .def_readonly("ipm_iterations", &ComponentStats::ipm_iterations)
      .def_readonly("retries", &ComponentStats::retries);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("solution", &SolveReport::solution)
      .def_readonly("ipm_iterations", &SolveReport::ipm_iterations)
      .def_readonly("components", &SolveReport::components);

  m.def(
      "parse_dimacs",
      [](const std::string& text, bool zero_cap_is_infinite) {
        return parse_dimacs(text, zero_cap_is_infinite);
      },
      py::arg("text"), py::arg("zero_cap_is_infinite") = false);
  m.def("write_dimacs", [](const ProblemInstance& inst) { return write_dimacs(inst); });
  m.def("write_solution", [](const Solution& sol) { return write_solution(sol); });

  m.def(
      "solve",
      [](const ProblemInstance& inst, std::uint64_t seed, double target_gap, double delta,
         const std::string& backend, bool exact) {
        SolverOptions opt;
        opt.seed = seed;
        opt.target_gap = target_gap;
        opt.delta = delta;
        if (backend == "offset-tree")
          opt.backend = eflow::FlowBackend::OffsetTree;
        else if (backend != "naive")
          throw ValidationError("backend must be 'naive' or 'offset-tree'");
        opt.exact_mode = exact;
        return solve(inst, opt);
      },
      py::arg("instance"), py::arg("seed") = 0, py::arg("target_gap") = 0.5,
      py::arg("delta") = 0.125, py::arg("backend") = "naive", py::arg("exact") = false);

  m.def("oracle_solve", [](const ProblemInstance& inst) { return oracle::ssp_mincost(inst); });

  m.def(
      "check_solution",
      [](const ProblemInstance& inst, const Solution& sol) {
        CheckReport rep = check_solution(inst, sol);
        return py::make_tuple(rep.ok, rep.detail);
      },
      py::arg("instance"), py::arg("solution"));

  m.def(
      "generate",
      [](const std::string& family, int nodes, int arcs, i64 max_cost, i64 cost_floor,
         i64 max_capacity, i64 demand_units, double infinite_probability,
         double zero_cap_probability, std::uint64_t seed) {
        GenSpec spec;
        spec.family = parse_family(family);
        spec.node_count = nodes;
        spec.arc_count = arcs;
        spec.max_cost = max_cost;
        spec.cost_floor = cost_floor;
        spec.max_capacity = max_capacity;
        spec.demand_units = demand_units;
        spec.infinite_probability = infinite_probability;
        spec.zero_cap_probability = zero_cap_probability;
        return generate(spec, seed);
      },
      py::arg("family") = "random-connected", py::arg("nodes") = 10, py::arg("arcs") = 20,
      py::arg("max_cost") = 10, py::arg("cost_floor") = 0, py::arg("max_capacity") = 10,
      py::arg("demand_units") = 10, py::arg("infinite_probability") = 0.0,
      py::arg("zero_cap_probability") = 0.0, py::arg("seed") = 0);
}

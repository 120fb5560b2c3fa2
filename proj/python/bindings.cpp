#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pmaxflow/combinatorial.hpp"
#include "pmaxflow/config.hpp"
#include "pmaxflow/dimacs.hpp"
#include "pmaxflow/error.hpp"
#include "pmaxflow/generators.hpp"
#include "pmaxflow/graph.hpp"
#include "pmaxflow/solver.hpp"

namespace py = pybind11;
using namespace pmaxflow;

namespace {

using EdgeTuple = std::tuple<int, int, double, double>;

Graph BuildGraph(int n, const std::vector<EdgeTuple>& edges, int s, int t,
                 std::optional<double> U) {
  std::vector<Edge> list;
  double bound = 1.0;
  for (const auto& [tail, head, fwd, bwd] : edges) {
    list.push_back(Edge{tail, head, fwd, bwd});
    bound = std::max({bound, fwd, bwd});
  }
  return Graph::Build(n, std::move(list), s, t, U.value_or(bound));
}

std::vector<EdgeTuple> EdgesOf(const Graph& g) {
  std::vector<EdgeTuple> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.tail, e.head, e.cap_fwd, e.cap_bwd);
  return out;
}

py::dict StatsDict(const InvariantStats& s) {
  py::dict d;
  d["accepted"] = s.accepted;
  d["halvings"] = s.halvings;
  d["violations"] = s.total_violations();
  d["max_rho"] = s.max_rho;
  d["max_coupling_ratio"] = s.max_coupling_ratio;
  d["max_fhat_ratio"] = s.max_fhat_ratio;
  d["max_w_added_ratio"] = s.max_w_added_ratio;
  d["max_w_l1_ratio"] = s.max_w_l1_ratio;
  d["min_precond_slack"] = s.min_precond_slack;
  return d;
}

py::dict SolveDict(const Graph& g, const std::string& config_json) {
  const SolverConfig config = ConfigFromJson(config_json);
  SolveReport rep;
  {
    py::gil_scoped_release release;
    rep = Solve(g, config);
  }
  py::dict d;
  d["value"] = rep.value;
  d["flow"] = rep.flow.values;
  d["F_star"] = rep.F_star;
  d["oracle_value"] = rep.oracle_value;
  d["oracle_agrees"] = rep.oracle_agrees;
  d["fault_detected"] = rep.fault_detected;
  d["warmup_iterations"] = rep.warmup_iterations;
  d["weighted_iterations"] = rep.weighted_iterations;
  d["rounded_value"] = rep.rounded_value;
  d["final_w_l1"] = rep.final_w_l1;
  d["p"] = rep.schedule.p;
  d["W"] = rep.schedule.W;
  d["eta"] = rep.schedule.eta;
  d["stats"] = StatsDict(rep.stats);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interior-point maximum flow";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def(py::init(&BuildGraph), py::arg("n"), py::arg("edges"), py::arg("s"),
           py::arg("t"), py::arg("U") = py::none(),
           "edges are (tail, head, cap_fwd, cap_bwd) tuples")
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("m", &Graph::m)
      .def_property_readonly("source", &Graph::source)
      .def_property_readonly("sink", &Graph::sink)
      .def_property_readonly("U", &Graph::capacity_bound)
      .def_property_readonly("edges", &EdgesOf)
      .def("to_dimacs", [](const Graph& g) {
        std::ostringstream out;
        WriteDimacs(out, g);
        return out.str();
      });

  m.def("from_dimacs", [](const std::string& text) {
    std::istringstream in(text);
    return ReadDimacs(in);
  }, py::arg("text"));
  m.def("read_dimacs", &ReadDimacsFile, py::arg("path"));
  m.def("generate", [](const std::string& family, int n, int m_edges, int U,
                       std::uint64_t seed) {
    return GenerateInstance(ParseFamily(family), n, m_edges, U, seed);
  }, py::arg("family"), py::arg("n"), py::arg("m") = 0, py::arg("U") = 1,
        py::arg("seed") = 1);
  m.def("reference_max_flow", [](const Graph& g) { return DinicMaxFlow(g).value; },
        py::arg("graph"), "maximum flow value from the combinatorial oracle");
  m.def("default_config", [] { return ConfigToJson(SolverConfig{}); });
  m.def("_solve", &SolveDict, py::arg("graph"), py::arg("config_json"));
}

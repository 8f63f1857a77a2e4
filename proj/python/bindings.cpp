#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "curvgraph/corpus.hpp"
#include "curvgraph/curvature.hpp"
#include "curvgraph/ends.hpp"
#include "curvgraph/errors.hpp"
#include "curvgraph/generator.hpp"
#include "curvgraph/ghlimit.hpp"
#include "curvgraph/graph_io.hpp"
#include "curvgraph/harmonic.hpp"
#include "curvgraph/report.hpp"

namespace py = pybind11;
using namespace curvgraph;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<long long>());
    case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const json& item : j) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

VertexFunction function_from_dict(const WeightedGraph& g, const py::dict& values) {
  VertexFunction f(g.order());
  for (const auto& item : values)
    f.set(g.index_of(py::cast<std::string>(item.first)), py::cast<double>(item.second));
  return f;
}

std::vector<gen::GenVertex> omega_from_list(const gen::GraphGenerator& g, const py::list& omega) {
  std::vector<gen::GenVertex> out;
  for (const auto& tok : omega) {
    const py::object dumped = py::module_::import("json").attr("dumps")(tok);
    out.push_back(g.vertex_from_json(py::cast<std::string>(dumped)));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "discrete curvature, harmonic functions and ends on weighted graphs";

  py::register_exception<ResourceError>(m, "ResourceError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<NumericError>(m, "NumericError");
  py::register_exception<IllPosedError>(m, "IllPosedError");

  py::class_<WeightedGraph>(m, "Graph")
      .def_static("from_json", [](const std::string& text) { return io::load_graph_json(text); })
      .def_static("from_file", &io::load_graph_file)
      .def("to_json", &io::graph_to_json)
      .def_property_readonly("order", &WeightedGraph::order)
      .def_property_readonly("edge_count", &WeightedGraph::edge_count)
      .def("labels",
           [](const WeightedGraph& g) {
             std::vector<std::string> out;
             for (Vertex v = 0; v < g.order(); ++v) out.push_back(g.label(v));
             return out;
           })
      .def("vertex_weight",
           [](const WeightedGraph& g, const std::string& v) {
             return g.vertex_weight(g.index_of(v));
           })
      .def("distance",
           [](const WeightedGraph& g, const std::string& u, const std::string& v) {
             return distance(g, g.index_of(u), g.index_of(v));
           })
      .def("sphere_size",
           [](const WeightedGraph& g, const std::string& x, int r) {
             return sphere(g, g.index_of(x), r).size();
           })
      .def("laplacian", [](const WeightedGraph& g, const py::dict& values, const std::string& x) {
        return laplacian(g, function_from_dict(g, values), g.index_of(x));
      });

  py::class_<gen::GraphGenerator>(m, "Generator")
      .def_static("from_json",
                  [](const std::string& text) { return gen::GraphGenerator::from_json(text); })
      .def_static("from_file", &gen::GraphGenerator::from_json_file)
      .def("root_label", [](const gen::GraphGenerator& g) { return g.root().to_string(); })
      .def(
          "ball",
          [](const gen::GraphGenerator& g, int radius, std::size_t budget) {
            const RootedBall b = gen::materialize_ball(g, g.root(), radius, budget);
            std::vector<int> depth = b.depth;
            return py::make_tuple(b.graph, depth);
          },
          py::arg("radius"), py::arg("budget") = gen::kDefaultVertexBudget)
      .def("validate_bounded_geometry", [](const gen::GraphGenerator& g, int radius) {
        return json_to_py(report::to_json(gen::validate_bounded_geometry(g, radius)));
      });

  m.def("gamma", [](const WeightedGraph& g, const py::dict& f, const std::string& x) {
    return curv::gamma(g, function_from_dict(g, f), g.index_of(x));
  });
  m.def("gamma2", [](const WeightedGraph& g, const py::dict& f, const std::string& x) {
    return curv::gamma2(g, function_from_dict(g, f), g.index_of(x));
  });

  m.def(
      "bakry_emery",
      [](const WeightedGraph& g, const std::string& x, double n, double tol) {
        return json_to_py(report::to_json(
            curv::bakry_emery_curvature(g, g.index_of(x), n, tol), g));
      },
      py::arg("graph"), py::arg("vertex"), py::arg("n") = curv::kInfinity,
      py::arg("tol") = 1e-8);

  m.def(
      "cd_check",
      [](const WeightedGraph& g, const std::string& x, double K, double n) {
        return curv::cd_check(g, g.index_of(x), K, n);
      },
      py::arg("graph"), py::arg("vertex"), py::arg("K"), py::arg("n") = curv::kInfinity);

  m.def("ollivier", [](const WeightedGraph& g, const std::string& x, const std::string& y) {
    return json_to_py(report::to_json(
        curv::ollivier_curvature(g, g.index_of(x), g.index_of(y)), g));
  });

  m.def(
      "curvature_outside",
      [](const gen::GraphGenerator& g, const py::list& omega, const std::string& mode,
         int probe, double tol) {
        const auto m_ = (mode == "be") ? curv::CurvatureMode::BakryEmery
                                       : curv::CurvatureMode::Ollivier;
        return json_to_py(
            report::to_json(curv::curvature_outside(g, omega_from_list(g, omega), m_, probe, tol)));
      },
      py::arg("generator"), py::arg("omega"), py::arg("mode") = "ollivier", py::arg("probe") = 4,
      py::arg("tol") = 1e-9);

  m.def("dirichlet_solve", [](const WeightedGraph& g, const py::dict& boundary) {
    const VertexFunction data = function_from_dict(g, boundary);
    std::vector<Vertex> interior;
    for (Vertex v = 0; v < g.order(); ++v)
      if (!data.defined(v)) interior.push_back(v);
    return json_to_py(report::to_json(harm::dirichlet_solve(g, interior, data), g));
  });

  m.def(
      "green_limit",
      [](const gen::GraphGenerator& g, const std::vector<int>& schedule, double stall_eps) {
        return json_to_py(report::to_json(harm::green_limit(g, g.root(), schedule, stall_eps)));
      },
      py::arg("generator"), py::arg("schedule"), py::arg("stall_eps") = 1e-2);

  m.def(
      "dimension_bound",
      [](const gen::GraphGenerator& g, int R0, const std::string& mode, int probe) {
        const auto m_ = (mode == "be") ? curv::CurvatureMode::BakryEmery
                                       : curv::CurvatureMode::Ollivier;
        return json_to_py(
            report::to_json(harm::dimension_certificate(g, g.root(), R0, m_, probe)));
      },
      py::arg("generator"), py::arg("R0"), py::arg("mode") = "ollivier", py::arg("probe") = 4);

  m.def(
      "count_ends",
      [](const gen::GraphGenerator& g, const py::list& omega, int probe,
         const std::vector<int>& schedule, double margin, double stall_eps) {
        return json_to_py(report::to_json(ends::count_ends(
            g, {omega_from_list(g, omega)}, probe, schedule, margin, stall_eps)));
      },
      py::arg("generator"), py::arg("omega"), py::arg("probe") = 3,
      py::arg("schedule") = std::vector<int>{5, 10, 20, 40}, py::arg("margin") = 0.05,
      py::arg("stall_eps") = 1e-3);

  m.def(
      "separating_basis",
      [](const gen::GraphGenerator& g, const py::list& omega, int probe, int rho,
         int sentinel_depth) {
        return json_to_py(report::to_json(
            ends::separating_harmonics(g, omega_from_list(g, omega), probe, rho, sentinel_depth)));
      },
      py::arg("generator"), py::arg("omega"), py::arg("probe") = 10, py::arg("rho") = 12,
      py::arg("sentinel_depth") = -1);

  m.def(
      "gh_check",
      [](const gen::GraphGenerator& g, const std::string& roots_json,
         const std::vector<int>& indices, int radius, double eps) {
        const gen::RootedGeneratorSequence seq{g, gen::RootRule::from_json(roots_json)};
        const auto balls = gh::materialize_sequence(seq, indices, radius);
        return json_to_py(report::to_json(gh::pgh_converges(balls, indices, radius, eps)));
      },
      py::arg("generator"), py::arg("roots_json"), py::arg("indices"), py::arg("radius") = 3,
      py::arg("eps") = 1e-3);

  m.def(
      "gh_semicontinuity",
      [](const gen::GraphGenerator& g, const std::string& roots_json,
         const std::vector<int>& indices, const std::string& mode, double eps, double tol) {
        const auto m_ = (mode == "be") ? curv::CurvatureMode::BakryEmery
                                       : curv::CurvatureMode::Ollivier;
        const int radius = (m_ == curv::CurvatureMode::BakryEmery) ? 2 : 3;
        const gen::RootedGeneratorSequence seq{g, gen::RootRule::from_json(roots_json)};
        const auto balls = gh::materialize_sequence(seq, indices, radius);
        const auto conv = gh::pgh_converges(balls, indices, radius, eps);
        return json_to_py(report::to_json(gh::curvature_semicontinuity_check(conv, balls, m_, tol)));
      },
      py::arg("generator"), py::arg("roots_json"), py::arg("indices"), py::arg("mode") = "ollivier",
      py::arg("eps") = 1e-3, py::arg("tol") = 1e-6);

  m.def("run_corpus", &corpus::run_corpus, py::arg("out_dir"));
}

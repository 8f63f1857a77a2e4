#include "curvgraph/corpus.hpp"

#include <filesystem>

#include "curvgraph/curvature.hpp"
#include "curvgraph/ends.hpp"
#include "curvgraph/generator.hpp"
#include "curvgraph/ghlimit.hpp"
#include "curvgraph/graph_io.hpp"
#include "curvgraph/harmonic.hpp"
#include "curvgraph/report.hpp"

namespace curvgraph::corpus {

using nlohmann::json;

namespace {

WeightedGraph unit_graph(int n, const std::vector<std::pair<int, int>>& edge_list) {
  std::vector<std::string> labels;
  std::vector<double> m(n, 1.0);
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<EdgeRef> edges;
  for (auto [u, v] : edge_list) edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), 1.0});
  return WeightedGraph(std::move(labels), std::move(m), edges);
}

}  // namespace

std::vector<NamedGraph> small_graphs() {
  std::vector<NamedGraph> out;
  out.push_back({"edge", unit_graph(2, {{0, 1}})});
  out.push_back({"path4", unit_graph(4, {{0, 1}, {1, 2}, {2, 3}})});
  out.push_back({"c3", unit_graph(3, {{0, 1}, {1, 2}, {0, 2}})});
  out.push_back({"c4", unit_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})});
  out.push_back({"c5", unit_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}})});
  out.push_back({"k4", unit_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})});
  out.push_back({"star13", unit_graph(4, {{0, 1}, {0, 2}, {0, 3}})});
  out.push_back({"cube", unit_graph(8, {{0, 1}, {0, 2}, {1, 3}, {2, 3},
                                        {4, 5}, {4, 6}, {5, 7}, {6, 7},
                                        {0, 4}, {1, 5}, {2, 6}, {3, 7}})});
  return out;
}

std::string lattice_spec(int d) {
  json j;
  j["family"] = "lattice";
  j["d"] = d;
  j["m"] = 1.0;
  j["w"] = 1.0;
  j["C"] = 2.0 * d;
  return j.dump();
}

std::string tree_spec(int degree) {
  json j;
  j["family"] = "tree";
  j["degree"] = degree;
  j["m"] = 1.0;
  j["w"] = 1.0;
  j["C"] = degree;
  return j.dump();
}

std::string glued_lattice_spec(int d) {
  json j;
  j["family"] = "lattice";
  j["d"] = d;
  j["m"] = 1.0;
  j["w"] = 1.0;
  j["C"] = 4.0 * d;  // the glue vertex carries both copies' neighbors
  j["glue"] = json::object();
  return j.dump();
}

void run_corpus(const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  auto path = [&](const std::string& rel) { return (root / rel).string(); };

  // --- fixtures -------------------------------------------------------------
  for (const NamedGraph& ng : small_graphs())
    report::write_file(path("fixtures/" + ng.name + ".json"), io::graph_to_json(ng.graph));
  report::write_file(path("fixtures/gen_z2.json"), lattice_spec(2));
  report::write_file(path("fixtures/gen_z3.json"), lattice_spec(3));
  report::write_file(path("fixtures/gen_glued_z2.json"), glued_lattice_spec(2));
  report::write_file(path("fixtures/gen_glued_z3.json"), glued_lattice_spec(3));

  // --- ollivier curvature on the small corpus -------------------------------
  {
    std::string csv = report::csv_line({"graph", "u", "v", "kappa"});
    for (const NamedGraph& ng : small_graphs())
      for (const EdgeRef& e : ng.graph.edges()) {
        const auto r = curv::ollivier_curvature(ng.graph, e.u, e.v);
        csv += report::csv_line({ng.name, ng.graph.label(e.u), ng.graph.label(e.v),
                                 report::format_double(r.kappa)});
      }
    report::write_file(path("ollivier_small.csv"), csv);
  }

  // --- bakry-emery on the small corpus ---------------------------------------
  {
    std::string csv = report::csv_line({"graph", "vertex", "k_inf"});
    for (const NamedGraph& ng : small_graphs())
      for (Vertex v = 0; v < ng.graph.order(); ++v) {
        const auto r = curv::bakry_emery_curvature(ng.graph, v);
        csv += report::csv_line({ng.name, ng.graph.label(v), report::format_double(r.curvature)});
      }
    report::write_file(path("bakry_emery_small.csv"), csv);
  }

  // --- curvature outside a finite set: glued Z^2 ----------------------------
  {
    const auto g = gen::GraphGenerator::from_json(glued_lattice_spec(2), "gen_glued_z2");
    json j;
    j["with_glue_excluded"] =
        report::to_json(curv::curvature_outside(g, {g.root()}, curv::CurvatureMode::Ollivier, 4));
    j["with_empty_omega"] =
        report::to_json(curv::curvature_outside(g, {}, curv::CurvatureMode::Ollivier, 4));
    report::write_file(path("glued_z2_outside.json"), j.dump(2) + "\n");
  }

  // --- green tables ----------------------------------------------------------
  {
    const auto z1 = gen::GraphGenerator::from_json(lattice_spec(1), "gen_z");
    const auto r = harm::green_limit(z1, z1.root(), {4, 6, 8, 10, 12}, 1e-2);
    report::write_file(path("green_z.csv"), report::green_limit_csv(r));
    report::write_file(path("green_z.json"), report::to_json(r).dump(2) + "\n");
  }
  {
    const auto z3 = gen::GraphGenerator::from_json(lattice_spec(3), "gen_z3");
    const auto r = harm::green_limit(z3, z3.root(), {4, 6, 8, 10, 12}, 1e-2);
    report::write_file(path("green_z3.csv"), report::green_limit_csv(r));
    report::write_file(path("green_z3.json"), report::to_json(r).dump(2) + "\n");
  }

  // --- ends ------------------------------------------------------------------
  {
    const auto z1 = gen::GraphGenerator::from_json(lattice_spec(1), "gen_z");
    const auto origin = z1.vertex_from_json("[0]");
    const auto minus = z1.vertex_from_json("[-1]");
    const auto plus = z1.vertex_from_json("[1]");
    const auto r = ends::count_ends(z1, {{origin}, {minus, origin, plus}}, 3,
                                    {5, 10, 20, 40}, 0.05, 1e-3);
    report::write_file(path("ends_z.json"), report::to_json(r).dump(2) + "\n");
  }
  {
    const auto z3 = gen::GraphGenerator::from_json(lattice_spec(3), "gen_z3");
    const auto r = ends::count_ends(z3, {{z3.root()}}, 3, {4, 6, 8, 10, 12}, 0.05, 2e-2);
    report::write_file(path("ends_z3.json"), report::to_json(r).dump(2) + "\n");
  }
  {
    const auto g = gen::GraphGenerator::from_json(glued_lattice_spec(3), "gen_glued_z3");
    const auto r = ends::count_ends(g, {{g.root()}}, 3, {4, 6, 8, 10, 12}, 0.05, 2e-2);
    report::write_file(path("ends_glued_z3.json"), report::to_json(r).dump(2) + "\n");
  }

  // --- dimension certificate + separating basis on glued Z^3 -----------------
  {
    const auto g = gen::GraphGenerator::from_json(glued_lattice_spec(3), "gen_glued_z3");
    const auto cert =
        harm::dimension_certificate(g, g.root(), 1, curv::CurvatureMode::Ollivier, 4);
    report::write_file(path("dimension_glued_z3.json"), report::to_json(cert).dump(2) + "\n");

    const auto refused =
        harm::dimension_certificate(g, g.root(), -1, curv::CurvatureMode::Ollivier, 3);
    report::write_file(path("dimension_glued_z3_empty_omega.json"),
                       report::to_json(refused).dump(2) + "\n");

    const auto basis = ends::separating_harmonics(g, {g.root()}, 10, 12, 8);
    report::write_file(path("basis_glued_z3.json"), report::to_json(basis).dump(2) + "\n");

    // gradient decay profile of the first separating function
    if (!basis.functions.empty()) {
      const auto rows = harm::gradient_decay_profile(basis.ball, basis.functions.front(),
                                                     {2, 3, 4, 5, 6, 7, 8, 9, 10});
      report::write_file(path("decay_glued_z3.csv"), report::decay_csv(rows));
    }
  }

  // --- pointed Gromov-Hausdorff machinery on glued Z^2 ------------------------
  {
    const auto g = gen::GraphGenerator::from_json(glued_lattice_spec(2), "gen_glued_z2");
    gen::RootRule rule;
    rule.direction = {1, 0};
    const gen::RootedGeneratorSequence seq{g, rule};
    std::vector<int> indices{4, 5, 6, 7, 8, 9, 10, 11, 12};
    const auto balls = gh::materialize_sequence(seq, indices, 3);
    const auto conv = gh::pgh_converges(balls, indices, 3, 1e-3);
    json j;
    j["convergence"] = report::to_json(conv);
    j["semicontinuity"] = report::to_json(
        gh::curvature_semicontinuity_check(conv, balls, curv::CurvatureMode::Ollivier));
    report::write_file(path("gh_glued_z2.json"), j.dump(2) + "\n");
  }

  // --- gradient maximum principle sample -------------------------------------
  {
    const auto z2 = gen::GraphGenerator::from_json(lattice_spec(2), "gen_z2");
    // radius 7 keeps B_3 of every interior W vertex exact inside the ball
    const RootedBall ball = gen::materialize_ball(z2, z2.root(), 7);
    // W = annulus of radii [1,4]; u = first lattice coordinate (harmonic)
    std::vector<Vertex> w_set;
    for (Vertex v = 0; v < ball.graph.order(); ++v)
      if (ball.depth[v] >= 1 && ball.depth[v] <= 4) w_set.push_back(v);
    VertexFunction u(ball.graph.order());
    for (Vertex v = 0; v < ball.graph.order(); ++v) {
      const std::string& label = ball.graph.label(v);
      u.set(v, std::stod(label.substr(1, label.find(',') - 1)));
    }
    const auto rep = harm::gradient_max_principle_check(ball.graph, w_set, u);
    report::write_file(path("maxgrad_z2.json"),
                       report::to_json(rep, ball.graph).dump(2) + "\n");
  }
}

}  // namespace curvgraph::corpus

#pragma once

#include <string>
#include <vector>

#include "curvgraph/generator.hpp"
#include "curvgraph/graph.hpp"

namespace testutil {

using curvgraph::EdgeRef;
using curvgraph::Vertex;
using curvgraph::VertexFunction;
using curvgraph::WeightedGraph;

inline WeightedGraph unit_graph(int n, const std::vector<std::pair<int, int>>& edge_list) {
  std::vector<std::string> labels;
  std::vector<double> m(n, 1.0);
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<EdgeRef> edges;
  for (auto [u, v] : edge_list)
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), 1.0});
  return WeightedGraph(std::move(labels), std::move(m), edges);
}

inline WeightedGraph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return unit_graph(n, edges);
}

inline VertexFunction from_values(const WeightedGraph& g, const std::vector<double>& values) {
  VertexFunction f(g.order());
  for (Vertex v = 0; v < g.order(); ++v) f.set(v, values[v]);
  return f;
}

inline curvgraph::gen::GraphGenerator lattice(int d) {
  return curvgraph::gen::GraphGenerator::from_json(
      "{\"family\":\"lattice\",\"d\":" + std::to_string(d) +
      ",\"m\":1.0,\"w\":1.0,\"C\":" + std::to_string(2 * d) + ".0}");
}

inline curvgraph::gen::GraphGenerator glued_lattice(int d) {
  return curvgraph::gen::GraphGenerator::from_json(
      "{\"family\":\"lattice\",\"d\":" + std::to_string(d) +
      ",\"m\":1.0,\"w\":1.0,\"C\":" + std::to_string(4 * d) + ".0,\"glue\":{}}");
}

inline curvgraph::gen::GraphGenerator tree(int degree) {
  return curvgraph::gen::GraphGenerator::from_json(
      "{\"family\":\"tree\",\"degree\":" + std::to_string(degree) +
      ",\"m\":1.0,\"w\":1.0,\"C\":" + std::to_string(degree) + ".0}");
}

}  // namespace testutil

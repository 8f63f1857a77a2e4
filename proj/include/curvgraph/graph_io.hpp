#pragma once

#include <string>
#include <vector>

#include "curvgraph/graph.hpp"

namespace curvgraph::io {

// Graph file format:
//   {"vertices":[{"id":0,"m":1.0},...], "edges":[{"u":0,"v":1,"w":1.0},...]}
// Ids may be integers or strings and are canonicalized to a sorted dense
// order (numeric when every id is an integer, lexicographic otherwise).
// Self-loops, duplicate edges and non-positive weights are rejected with the
// offending element named; malformed JSON reports line and column.
WeightedGraph load_graph_json(const std::string& text, const std::string& source_name = "<input>");
WeightedGraph load_graph_file(const std::string& path);

std::string graph_to_json(const WeightedGraph& g);

// {"vertices": [id, id, ...]} resolved against g's labels.
std::vector<Vertex> load_vertex_set(const std::string& text, const WeightedGraph& g,
                                    const std::string& source_name = "<input>");
std::vector<Vertex> load_vertex_set_file(const std::string& path, const WeightedGraph& g);

// {"values": [{"id":..., "value":...}, ...]}
VertexFunction load_vertex_function(const std::string& text, const WeightedGraph& g,
                                    const std::string& source_name = "<input>");
VertexFunction load_vertex_function_file(const std::string& path, const WeightedGraph& g);

std::string read_file(const std::string& path);

}  // namespace curvgraph::io

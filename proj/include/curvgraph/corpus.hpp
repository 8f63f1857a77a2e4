#pragma once

#include <string>
#include <vector>

#include "curvgraph/graph.hpp"

namespace curvgraph::corpus {

// The small unit-weight graphs the oracle cross-checks run on.
struct NamedGraph {
  std::string name;
  WeightedGraph graph;
};
std::vector<NamedGraph> small_graphs();

// Generator specs for the standard infinite examples, as JSON text.
std::string lattice_spec(int d);
std::string tree_spec(int degree);
std::string glued_lattice_spec(int d);

// Regenerates the full report tree under out_dir. Deterministic: identical
// invocations produce byte-identical trees.
void run_corpus(const std::string& out_dir);

}  // namespace curvgraph::corpus

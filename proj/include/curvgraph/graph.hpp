#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "curvgraph/errors.hpp"

namespace curvgraph {

// Dense vertex index inside one WeightedGraph. Graphs canonicalize external
// ids on construction; the original id survives as the vertex label.
using Vertex = std::int32_t;

struct EdgeRef {
  Vertex u, v;  // u < v
  double w;
};

// Finite simple graph with positive vertex weights m and symmetric edge
// weights w. Immutable after construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Vertices are (label, m) pairs in canonical (sorted) order; edges refer to
  // dense indices into that order. Throws DomainError on self-loops, parallel
  // edges or non-positive weights.
  WeightedGraph(std::vector<std::string> labels, std::vector<double> vertex_weights,
                const std::vector<EdgeRef>& edges);

  Vertex order() const { return static_cast<Vertex>(m_.size()); }
  std::size_t edge_count() const { return edges_.size(); }

  double vertex_weight(Vertex x) const { return m_[check(x)]; }
  const std::string& label(Vertex x) const { return labels_[check(x)]; }

  // Dense index for an external label; DomainError when unknown.
  Vertex index_of(const std::string& label) const;
  std::optional<Vertex> find(const std::string& label) const;

  // Neighbors sorted by index, each with its edge weight.
  const std::vector<std::pair<Vertex, double>>& neighbors(Vertex x) const {
    return adj_[check(x)];
  }
  int degree(Vertex x) const { return static_cast<int>(adj_[check(x)].size()); }
  bool adjacent(Vertex x, Vertex y) const;
  // Edge weight w(x,y); DomainError if x !~ y.
  double edge_weight(Vertex x, Vertex y) const;

  // Canonical edge list (u < v), sorted lexicographically.
  const std::vector<EdgeRef>& edges() const { return edges_; }

  bool is_connected() const;

 private:
  Vertex check(Vertex x) const {
    if (x < 0 || x >= order()) throw DomainError("unknown vertex index " + std::to_string(x));
    return x;
  }

  std::vector<double> m_;
  std::vector<std::vector<std::pair<Vertex, double>>> adj_;
  std::vector<EdgeRef> edges_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> by_label_;
};

// Real-valued function defined on an explicit subset of a graph's vertices.
class VertexFunction {
 public:
  VertexFunction() = default;
  explicit VertexFunction(Vertex order) : values_(order, 0.0), defined_(order, 0) {}

  static VertexFunction constant(const WeightedGraph& g, double c);

  void set(Vertex x, double value);
  bool defined(Vertex x) const {
    return x >= 0 && x < static_cast<Vertex>(defined_.size()) && defined_[x];
  }
  double at(Vertex x) const;
  void unset(Vertex x);

  Vertex size() const { return static_cast<Vertex>(values_.size()); }
  std::size_t domain_size() const;
  std::vector<Vertex> domain() const;

  double max_abs() const;  // sup norm over the domain (0 if empty)

 private:
  std::vector<double> values_;
  std::vector<char> defined_;
};

// Induced subgraph of radius `radius` around `root`, with BFS depths.
// Vertex ids are layer-major: depth 0 first, then depth 1 sorted by parent
// graph id, and so on; growing the radius keeps existing ids stable.
struct RootedBall {
  WeightedGraph graph;
  Vertex root = 0;
  int radius = 0;
  std::vector<int> depth;  // indexed by ball vertex

  std::vector<Vertex> sphere(int r) const;
};

// Length of the shortest edge path from x to y, ignoring edge weights;
// nullopt when x and y are disconnected.
std::optional<int> distance(const WeightedGraph& g, Vertex x, Vertex y);

// Distances from x to every vertex; -1 where unreachable.
std::vector<int> distances_from(const WeightedGraph& g, Vertex x);

RootedBall ball(const WeightedGraph& g, Vertex x0, int radius);
std::vector<Vertex> sphere(const WeightedGraph& g, Vertex x0, int radius);

// Laplacian (Delta f)(x) = sum_{y ~ x} w(x,y)/m(x) * (f(y) - f(x)).
// DomainError if f is not defined on x and all its neighbors.
double laplacian(const WeightedGraph& g, const VertexFunction& f, Vertex x);

// {y not in K : y adjacent to K}, sorted.
std::vector<Vertex> exterior_boundary(const WeightedGraph& g, const std::vector<Vertex>& K);
// K together with its exterior boundary, sorted.
std::vector<Vertex> closure(const WeightedGraph& g, const std::vector<Vertex>& K);
// {x in W : x has a neighbor outside W}, sorted.
std::vector<Vertex> interior_boundary(const WeightedGraph& g, const std::vector<Vertex>& W);

// Induced subgraph on S with inherited weights. The second result maps new
// indices back to indices of g.
std::pair<WeightedGraph, std::vector<Vertex>> induced_subgraph(const WeightedGraph& g,
                                                               const std::vector<Vertex>& S);

// Connected components of the induced subgraph on S (S need not be sorted);
// each component sorted, components ordered by smallest member.
std::vector<std::vector<Vertex>> components_within(const WeightedGraph& g,
                                                   const std::vector<Vertex>& S);

}  // namespace curvgraph

#include "curvgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace curvgraph {

WeightedGraph::WeightedGraph(std::vector<std::string> labels, std::vector<double> vertex_weights,
                             const std::vector<EdgeRef>& edges) {
  if (labels.size() != vertex_weights.size())
    throw DomainError("vertex label/weight count mismatch");
  const Vertex n = static_cast<Vertex>(labels.size());
  for (Vertex i = 0; i < n; ++i) {
    if (!(vertex_weights[i] > 0.0))
      throw DomainError("vertex weight must be positive at '" + labels[i] + "'");
  }
  labels_ = std::move(labels);
  m_ = std::move(vertex_weights);
  adj_.assign(n, {});
  by_label_.reserve(labels_.size());
  for (Vertex i = 0; i < n; ++i) {
    if (!by_label_.emplace(labels_[i], i).second)
      throw DomainError("duplicate vertex id '" + labels_[i] + "'");
  }

  std::set<std::pair<Vertex, Vertex>> seen;
  edges_.reserve(edges.size());
  for (const EdgeRef& e : edges) {
    Vertex u = e.u, v = e.v;
    if (u < 0 || u >= n || v < 0 || v >= n) throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("self-loop at '" + labels_[u] + "'");
    if (u > v) std::swap(u, v);
    if (!(e.w > 0.0))
      throw DomainError("edge weight must be positive on {" + labels_[u] + "," + labels_[v] + "}");
    if (!seen.emplace(u, v).second)
      throw DomainError("duplicate edge {" + labels_[u] + "," + labels_[v] + "}");
    edges_.push_back({u, v, e.w});
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const EdgeRef& a, const EdgeRef& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  for (const EdgeRef& e : edges_) {
    adj_[e.u].emplace_back(e.v, e.w);
    adj_[e.v].emplace_back(e.u, e.w);
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

Vertex WeightedGraph::index_of(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) throw DomainError("unknown vertex '" + label + "'");
  return it->second;
}

std::optional<Vertex> WeightedGraph::find(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

bool WeightedGraph::adjacent(Vertex x, Vertex y) const {
  const auto& nbrs = adj_[check(x)];
  check(y);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), std::make_pair(y, 0.0));
  return it != nbrs.end() && it->first == y;
}

double WeightedGraph::edge_weight(Vertex x, Vertex y) const {
  const auto& nbrs = adj_[check(x)];
  check(y);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), std::make_pair(y, 0.0));
  if (it == nbrs.end() || it->first != y)
    throw DomainError("no edge {" + label(x) + "," + label(y) + "}");
  return it->second;
}

bool WeightedGraph::is_connected() const {
  if (order() == 0) return true;
  const auto d = distances_from(*this, 0);
  return std::find(d.begin(), d.end(), -1) == d.end();
}

VertexFunction VertexFunction::constant(const WeightedGraph& g, double c) {
  VertexFunction f(g.order());
  for (Vertex x = 0; x < g.order(); ++x) f.set(x, c);
  return f;
}

void VertexFunction::set(Vertex x, double value) {
  if (x < 0) throw DomainError("negative vertex index");
  if (x >= static_cast<Vertex>(values_.size())) {
    values_.resize(x + 1, 0.0);
    defined_.resize(x + 1, 0);
  }
  values_[x] = value;
  defined_[x] = 1;
}

double VertexFunction::at(Vertex x) const {
  if (!defined(x))
    throw DomainError("function not defined on vertex index " + std::to_string(x));
  return values_[x];
}

void VertexFunction::unset(Vertex x) {
  if (x >= 0 && x < static_cast<Vertex>(defined_.size())) defined_[x] = 0;
}

std::size_t VertexFunction::domain_size() const {
  std::size_t n = 0;
  for (char d : defined_) n += (d != 0);
  return n;
}

std::vector<Vertex> VertexFunction::domain() const {
  std::vector<Vertex> out;
  for (Vertex x = 0; x < size(); ++x)
    if (defined_[x]) out.push_back(x);
  return out;
}

double VertexFunction::max_abs() const {
  double m = 0.0;
  for (Vertex x = 0; x < size(); ++x)
    if (defined_[x]) m = std::max(m, std::abs(values_[x]));
  return m;
}

std::vector<int> distances_from(const WeightedGraph& g, Vertex x) {
  std::vector<int> dist(g.order(), -1);
  if (g.order() == 0) return dist;
  dist[x] = 0;
  std::deque<Vertex> q{x};
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (const auto& [v, w] : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

std::optional<int> distance(const WeightedGraph& g, Vertex x, Vertex y) {
  if (x == y) {
    g.vertex_weight(x);  // validates
    return 0;
  }
  g.vertex_weight(y);
  const auto dist = distances_from(g, x);
  if (dist[y] < 0) return std::nullopt;
  return dist[y];
}

std::vector<Vertex> sphere(const WeightedGraph& g, Vertex x0, int radius) {
  if (radius < 0) throw DomainError("negative radius");
  const auto dist = distances_from(g, x0);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.order(); ++v)
    if (dist[v] == radius) out.push_back(v);
  return out;
}

RootedBall ball(const WeightedGraph& g, Vertex x0, int radius) {
  if (radius < 0) throw DomainError("negative radius");
  const auto dist = distances_from(g, x0);

  // Layer-major vertex order; inside a layer the parent graph order wins.
  std::vector<Vertex> members;
  for (int r = 0; r <= radius; ++r)
    for (Vertex v = 0; v < g.order(); ++v)
      if (dist[v] == r) members.push_back(v);

  std::vector<Vertex> new_index(g.order(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) new_index[members[i]] = static_cast<Vertex>(i);

  std::vector<std::string> labels;
  std::vector<double> mw;
  labels.reserve(members.size());
  for (Vertex v : members) {
    labels.push_back(g.label(v));
    mw.push_back(g.vertex_weight(v));
  }
  std::vector<EdgeRef> edges;
  for (const EdgeRef& e : g.edges())
    if (new_index[e.u] >= 0 && new_index[e.v] >= 0)
      edges.push_back({new_index[e.u], new_index[e.v], e.w});

  RootedBall b;
  b.graph = WeightedGraph(std::move(labels), std::move(mw), edges);
  b.root = 0;
  b.radius = radius;
  b.depth.reserve(members.size());
  for (Vertex v : members) b.depth.push_back(dist[v]);
  return b;
}

std::vector<Vertex> RootedBall::sphere(int r) const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < graph.order(); ++v)
    if (depth[v] == r) out.push_back(v);
  return out;
}

double laplacian(const WeightedGraph& g, const VertexFunction& f, Vertex x) {
  const double fx = f.at(x);
  const double mx = g.vertex_weight(x);
  double acc = 0.0;
  for (const auto& [y, w] : g.neighbors(x)) acc += w * (f.at(y) - fx);
  return acc / mx;
}

namespace {
std::vector<char> member_mask(const WeightedGraph& g, const std::vector<Vertex>& S) {
  std::vector<char> in(g.order(), 0);
  for (Vertex v : S) {
    if (v < 0 || v >= g.order()) throw DomainError("vertex set member out of range");
    in[v] = 1;
  }
  return in;
}
}  // namespace

std::vector<Vertex> exterior_boundary(const WeightedGraph& g, const std::vector<Vertex>& K) {
  const auto in = member_mask(g, K);
  std::vector<char> hit(g.order(), 0);
  for (Vertex v : K)
    for (const auto& [y, w] : g.neighbors(v))
      if (!in[y]) hit[y] = 1;
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.order(); ++v)
    if (hit[v]) out.push_back(v);
  return out;
}

std::vector<Vertex> closure(const WeightedGraph& g, const std::vector<Vertex>& K) {
  auto out = exterior_boundary(g, K);
  out.insert(out.end(), K.begin(), K.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Vertex> interior_boundary(const WeightedGraph& g, const std::vector<Vertex>& W) {
  const auto in = member_mask(g, W);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (!in[v]) continue;
    for (const auto& [y, w] : g.neighbors(v)) {
      if (!in[y]) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

std::pair<WeightedGraph, std::vector<Vertex>> induced_subgraph(const WeightedGraph& g,
                                                               const std::vector<Vertex>& S) {
  auto members = S;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  member_mask(g, members);  // range check

  std::vector<Vertex> new_index(g.order(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) new_index[members[i]] = static_cast<Vertex>(i);

  std::vector<std::string> labels;
  std::vector<double> mw;
  for (Vertex v : members) {
    labels.push_back(g.label(v));
    mw.push_back(g.vertex_weight(v));
  }
  std::vector<EdgeRef> edges;
  for (const EdgeRef& e : g.edges())
    if (new_index[e.u] >= 0 && new_index[e.v] >= 0)
      edges.push_back({new_index[e.u], new_index[e.v], e.w});
  return {WeightedGraph(std::move(labels), std::move(mw), edges), std::move(members)};
}

std::vector<std::vector<Vertex>> components_within(const WeightedGraph& g,
                                                   const std::vector<Vertex>& S) {
  const auto in = member_mask(g, S);
  std::vector<char> visited(g.order(), 0);
  std::vector<std::vector<Vertex>> comps;
  for (Vertex s = 0; s < g.order(); ++s) {
    if (!in[s] || visited[s]) continue;
    std::vector<Vertex> comp;
    std::deque<Vertex> q{s};
    visited[s] = 1;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop_front();
      comp.push_back(u);
      for (const auto& [v, w] : g.neighbors(u)) {
        if (in[v] && !visited[v]) {
          visited[v] = 1;
          q.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace curvgraph

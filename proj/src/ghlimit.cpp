#include "curvgraph/ghlimit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "curvgraph/errors.hpp"

namespace curvgraph::gh {

namespace {

struct Signature {
  int depth;
  int degree;
  std::vector<std::pair<int, int>> profile;  // sorted (depth, degree) of neighbors

  bool operator==(const Signature& o) const {
    return depth == o.depth && degree == o.degree && profile == o.profile;
  }
};

std::vector<Signature> signatures(const RootedBall& b) {
  std::vector<Signature> sig(b.graph.order());
  for (Vertex v = 0; v < b.graph.order(); ++v) {
    sig[v].depth = b.depth[v];
    sig[v].degree = b.graph.degree(v);
    for (const auto& [u, w] : b.graph.neighbors(v))
      sig[v].profile.emplace_back(b.depth[u], b.graph.degree(u));
    std::sort(sig[v].profile.begin(), sig[v].profile.end());
  }
  return sig;
}

struct IsoSearch {
  const RootedBall& b1;
  const RootedBall& b2;
  std::vector<Signature> sig1, sig2;
  std::optional<double> weight_eps;
  long budget;
  std::vector<Vertex> map;      // b1 -> b2, -1 unset
  std::vector<char> used;       // b2 side

  IsoSearch(const RootedBall& a, const RootedBall& b, std::optional<double> eps, long nb)
      : b1(a), b2(b), sig1(signatures(a)), sig2(signatures(b)), weight_eps(eps), budget(nb) {
    map.assign(b1.graph.order(), -1);
    used.assign(b2.graph.order(), 0);
  }

  bool compatible(Vertex u, Vertex v) {
    if (!(sig1[u] == sig2[v])) return false;
    if (weight_eps &&
        std::abs(b1.graph.vertex_weight(u) - b2.graph.vertex_weight(v)) > *weight_eps)
      return false;
    int mapped_u = 0;
    for (const auto& [n, w] : b1.graph.neighbors(u)) {
      if (map[n] < 0) continue;
      ++mapped_u;
      if (!b2.graph.adjacent(v, map[n])) return false;
      if (weight_eps && std::abs(w - b2.graph.edge_weight(v, map[n])) > *weight_eps) return false;
    }
    int mapped_v = 0;
    for (const auto& [n, w] : b2.graph.neighbors(v))
      if (used[n]) ++mapped_v;
    return mapped_u == mapped_v;
  }

  bool extend(Vertex u) {
    if (u == b1.graph.order()) return true;
    if (--budget <= 0) throw ResourceError("isomorphism search exceeded its node budget");
    for (Vertex v = 0; v < b2.graph.order(); ++v) {
      if (used[v] || !compatible(u, v)) continue;
      map[u] = v;
      used[v] = 1;
      if (extend(u + 1)) return true;
      map[u] = -1;
      used[v] = 0;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<Vertex>> rooted_isomorphism(const RootedBall& b1, const RootedBall& b2,
                                                      std::optional<double> weight_eps,
                                                      long node_budget) {
  if (b1.graph.order() != b2.graph.order() || b1.graph.edge_count() != b2.graph.edge_count())
    return std::nullopt;

  // layer size histograms must agree
  std::map<int, int> h1, h2;
  for (int d : b1.depth) ++h1[d];
  for (int d : b2.depth) ++h2[d];
  if (h1 != h2) return std::nullopt;

  IsoSearch search(b1, b2, weight_eps, node_budget);
  // roots map to roots; vertex 0 is the root on both sides
  if (!search.compatible(b1.root, b2.root)) return std::nullopt;
  search.map[b1.root] = b2.root;
  search.used[b2.root] = 1;
  if (!search.extend(1)) return std::nullopt;
  return search.map;
}

std::vector<RootedBall> materialize_sequence(const gen::RootedGeneratorSequence& seq,
                                             const std::vector<int>& indices, int radius,
                                             std::size_t vertex_budget) {
  std::vector<RootedBall> balls;
  balls.reserve(indices.size());
  for (int i : indices)
    balls.push_back(gen::materialize_ball(seq.generator, seq.root_at(i), radius, vertex_budget));
  return balls;
}

namespace {

std::pair<double, double> weight_deviation(const RootedBall& target, const RootedBall& ball,
                                           const std::vector<Vertex>& map_from_target) {
  double m_dev = 0.0, w_dev = 0.0;
  for (Vertex x = 0; x < target.graph.order(); ++x)
    m_dev = std::max(m_dev, std::abs(ball.graph.vertex_weight(map_from_target[x]) -
                                     target.graph.vertex_weight(x)));
  for (const EdgeRef& e : target.graph.edges())
    w_dev = std::max(w_dev, std::abs(ball.graph.edge_weight(map_from_target[e.u],
                                                            map_from_target[e.v]) -
                                     e.w));
  return {m_dev, w_dev};
}

}  // namespace

ConvergenceReport pgh_converges(const std::vector<RootedBall>& balls,
                                const std::vector<int>& indices, int radius, double eps) {
  if (balls.empty() || balls.size() != indices.size())
    throw DomainError("pgh_converges: ball/index count mismatch");
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i] <= indices[i - 1]) throw DomainError("indices must be strictly increasing");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");

  ConvergenceReport rep;
  rep.radius = radius;
  rep.eps = eps;
  const RootedBall& target = balls.back();

  for (std::size_t i = 0; i < balls.size(); ++i) {
    IndexEntry entry;
    entry.index = indices[i];
    auto iso = rooted_isomorphism(target, balls[i]);
    if (iso) {
      entry.isomorphic = true;
      auto [m_dev, w_dev] = weight_deviation(target, balls[i], *iso);
      if (std::max(m_dev, w_dev) > eps) {
        // another isomorphism might match the weights; search again boxed
        auto boxed = rooted_isomorphism(target, balls[i], eps);
        if (boxed) {
          iso = boxed;
          std::tie(m_dev, w_dev) = weight_deviation(target, balls[i], *iso);
        }
      }
      entry.m_deviation = m_dev;
      entry.w_deviation = w_dev;
      entry.map_from_target = std::move(*iso);
    }
    rep.entries.push_back(std::move(entry));
  }

  // The last ball is isomorphic to itself by construction, so a stabilization
  // claim needs at least one earlier index to agree (unless only one index
  // was tested at all).
  const std::size_t comb_cut = rep.entries.size() >= 2 ? rep.entries.size() - 1
                                                       : rep.entries.size();
  for (std::size_t i = 0; i < comb_cut; ++i) {
    bool all = true;
    for (std::size_t j = i; j < rep.entries.size(); ++j) all = all && rep.entries[j].isomorphic;
    if (all) {
      rep.stabilization_index = indices[i];
      break;
    }
  }
  if (rep.entries.size() == 1 && rep.entries.front().isomorphic)
    rep.stabilization_index = indices.front();
  // The last index matches its own weights trivially; settling means at least
  // one earlier tested index already sits within eps of it.
  const std::size_t weight_cut = rep.entries.size() >= 2 ? rep.entries.size() - 1
                                                         : rep.entries.size();
  for (std::size_t i = 0; i < weight_cut; ++i) {
    bool all = true;
    for (std::size_t j = i; j < rep.entries.size(); ++j) {
      const IndexEntry& e = rep.entries[j];
      all = all && e.isomorphic && std::max(e.m_deviation, e.w_deviation) <= eps;
    }
    if (all) {
      rep.weight_stabilization_index = indices[i];
      break;
    }
  }
  if (rep.entries.size() == 1 && rep.entries.front().isomorphic)
    rep.weight_stabilization_index = indices.front();

  if (!rep.stabilization_index)
    rep.verdict = ConvergenceVerdict::NotStabilized;
  else if (!rep.weight_stabilization_index)
    rep.verdict = ConvergenceVerdict::WeightsDiverge;
  else
    rep.verdict = ConvergenceVerdict::Converged;
  return rep;
}

LimitBall pgh_limit(const std::vector<RootedBall>& balls, const std::vector<int>& indices,
                    int radius, double eps) {
  const ConvergenceReport rep = pgh_converges(balls, indices, radius, eps);
  if (rep.verdict != ConvergenceVerdict::Converged)
    throw DomainError("pgh_limit refused: sequence not converged at this radius/eps");
  LimitBall out;
  out.ball = balls.back();
  out.provenance = indices;
  return out;
}

FunctionConvergenceReport function_convergence(const ConvergenceReport& convergence,
                                               const std::vector<RootedBall>& balls,
                                               const std::vector<VertexFunction>& u_list,
                                               const VertexFunction& u_limit, double eps) {
  if (balls.size() != u_list.size() || balls.size() != convergence.entries.size())
    throw DomainError("function_convergence: sequence length mismatch");
  if (convergence.verdict != ConvergenceVerdict::Converged)
    throw DomainError("function_convergence refused: graphs do not converge");

  FunctionConvergenceReport rep;
  rep.eps = eps;
  const RootedBall& target = balls.back();

  for (std::size_t i = 0; i < balls.size(); ++i) {
    const IndexEntry& entry = convergence.entries[i];
    if (!entry.isomorphic) {
      rep.deviations.push_back(-1.0);
      continue;
    }
    double dev = 0.0;
    for (Vertex x = 0; x < target.graph.order(); ++x)
      dev = std::max(dev, std::abs(u_list[i].at(entry.map_from_target[x]) - u_limit.at(x)));
    rep.deviations.push_back(dev);
  }

  for (std::size_t i = 0; i < rep.deviations.size(); ++i) {
    bool all = true;
    for (std::size_t j = i; j < rep.deviations.size(); ++j)
      all = all && rep.deviations[j] >= 0.0 && rep.deviations[j] <= eps;
    if (all) {
      rep.stabilization_index = convergence.entries[i].index;
      break;
    }
  }
  rep.converged = rep.stabilization_index.has_value();
  return rep;
}

SemicontinuityReport curvature_semicontinuity_check(const ConvergenceReport& convergence,
                                                    const std::vector<RootedBall>& balls,
                                                    curv::CurvatureMode mode, double tol) {
  const int needed = (mode == curv::CurvatureMode::BakryEmery) ? 2 : 3;
  if (convergence.radius < needed)
    throw DomainError("semicontinuity needs radius >= " + std::to_string(needed));
  if (convergence.verdict != ConvergenceVerdict::Converged)
    throw DomainError("semicontinuity refused: sequence not converged");

  SemicontinuityReport rep;
  rep.mode = mode;
  rep.tol = tol;
  const RootedBall& target = balls.back();

  // tail = tested indices past combinatorial stabilization
  std::vector<std::size_t> tail;
  for (std::size_t i = 0; i < convergence.entries.size(); ++i)
    if (convergence.entries[i].index >= *convergence.stabilization_index) tail.push_back(i);

  if (mode == curv::CurvatureMode::BakryEmery) {
    SemicontinuityRow row;
    row.where = "root";
    for (std::size_t i : tail) {
      const curv::BakryEmeryResult r =
          curv::bakry_emery_curvature(balls[i].graph, balls[i].root);
      row.tail_values.push_back(r.curvature);
    }
    row.limit_value = curv::bakry_emery_curvature(target.graph, target.root).curvature;
    row.min_tail = *std::min_element(row.tail_values.begin(), row.tail_values.end());
    row.holds = row.limit_value >= row.min_tail - tol;
    rep.rows.push_back(std::move(row));
  } else {
    for (const auto& [nbr, w] : target.graph.neighbors(target.root)) {
      SemicontinuityRow row;
      row.where = "{" + target.graph.label(target.root) + "," + target.graph.label(nbr) + "}";
      for (std::size_t i : tail) {
        const Vertex mapped = convergence.entries[i].map_from_target[nbr];
        const curv::OllivierResult r =
            curv::ollivier_curvature(balls[i].graph, balls[i].root, mapped);
        row.tail_values.push_back(r.kappa);
      }
      row.limit_value = curv::ollivier_curvature(target.graph, target.root, nbr).kappa;
      row.min_tail = *std::min_element(row.tail_values.begin(), row.tail_values.end());
      row.holds = row.limit_value >= row.min_tail - tol;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.holds = true;
  for (const SemicontinuityRow& row : rep.rows) rep.holds = rep.holds && row.holds;
  return rep;
}

}  // namespace curvgraph::gh

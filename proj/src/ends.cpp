#include "curvgraph/ends.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "curvgraph/errors.hpp"

namespace curvgraph::ends {

namespace {

std::vector<Vertex> omega_indices(const WeightedGraph& g,
                                  const std::vector<gen::GenVertex>& omega) {
  std::vector<Vertex> out;
  for (const gen::GenVertex& v : omega) {
    const auto idx = g.find(v.to_string());
    if (idx) out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Components of (ball \ omega) that reach the sphere layer at `radius`.
std::vector<std::vector<Vertex>> sphere_components(const RootedBall& ball,
                                                   const std::vector<Vertex>& omega_idx,
                                                   int radius) {
  std::vector<char> excluded(ball.graph.order(), 0);
  for (Vertex v : omega_idx) excluded[v] = 1;
  std::vector<Vertex> rest;
  for (Vertex v = 0; v < ball.graph.order(); ++v)
    if (!excluded[v] && ball.depth[v] <= radius) rest.push_back(v);

  // restrict connectivity to the sub-ball
  std::vector<std::vector<Vertex>> comps;
  std::vector<char> in(ball.graph.order(), 0), seen(ball.graph.order(), 0);
  for (Vertex v : rest) in[v] = 1;
  for (Vertex s : rest) {
    if (seen[s]) continue;
    std::vector<Vertex> stack{s}, comp;
    seen[s] = 1;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto& [v, w] : ball.graph.neighbors(u))
        if (in[v] && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    std::sort(comp.begin(), comp.end());
    bool touches = false;
    for (Vertex v : comp) touches = touches || (ball.depth[v] == radius);
    if (touches) comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

}  // namespace

EndsResult ends_wrt(const gen::GraphGenerator& g, const std::vector<gen::GenVertex>& omega,
                    int probe_radius, std::size_t vertex_budget) {
  if (probe_radius < 1) throw DomainError("probe radius must be at least 1");
  std::vector<gen::GenVertex> tokens;
  const RootedBall ball =
      gen::materialize_ball(g, g.root(), probe_radius, vertex_budget, &tokens);

  const auto omega_idx = omega_indices(ball.graph, omega);
  if (omega_idx.size() != omega.size())
    throw DomainError("omega has vertices outside the probe ball");
  for (Vertex v : omega_idx)
    if (ball.depth[v] >= probe_radius)
      throw DomainError("omega touches the probe sphere; enlarge the probe radius");

  EndsResult result;
  result.probe_radius = probe_radius;

  const auto comps = sphere_components(ball, omega_idx, probe_radius);
  for (const auto& comp : comps) {
    End e;
    e.omega = omega;
    e.probe_radius = probe_radius;
    e.representative = tokens[comp.front()];  // smallest ball index of the component
    e.component_labels.reserve(comp.size());
    for (Vertex v : comp) e.component_labels.push_back(ball.graph.label(v));
    result.ends.push_back(std::move(e));
  }

  if (probe_radius >= 3) {
    bool fits = true;
    for (Vertex v : omega_idx) fits = fits && (ball.depth[v] < probe_radius - 2);
    if (fits) {
      const auto comps_small = sphere_components(ball, omega_idx, probe_radius - 2);
      result.stable = (comps_small.size() == comps.size());
    }
  }
  return result;
}

BarrierSolution barrier(const gen::GraphGenerator& g, const End& end, int rho,
                        harm::SolveOptions opts) {
  if (rho < 1) throw DomainError("barrier needs rho >= 1");
  BarrierSolution out;
  out.ball = gen::materialize_ball(g, g.root(), rho, opts.vertex_budget);
  const WeightedGraph& graph = out.ball.graph;

  const auto omega_idx = omega_indices(graph, end.omega);
  if (omega_idx.size() != end.omega.size())
    throw DomainError("omega escapes the barrier ball; enlarge rho");
  for (Vertex v : omega_idx)
    if (out.ball.depth[v] >= rho)
      throw DomainError("omega touches the zero layer of the barrier problem");

  const auto rep = graph.find(end.representative.to_string());
  if (!rep) throw DomainError("end representative missing from the barrier ball");

  // the end inside this ball: component of the representative in B_rho \ omega
  std::vector<char> excluded(graph.order(), 0);
  for (Vertex v : omega_idx) excluded[v] = 1;
  std::vector<Vertex> candidates;
  for (Vertex v = 0; v < graph.order(); ++v)
    if (!excluded[v]) candidates.push_back(v);
  std::vector<Vertex> component;
  for (const auto& comp : components_within(graph, candidates)) {
    if (std::binary_search(comp.begin(), comp.end(), *rep)) {
      component = comp;
      break;
    }
  }
  if (component.empty()) throw IllPosedError("end component is empty at this rho");

  // unknowns strictly inside; the depth-rho layer carries 0, omega-neighbors 1
  std::vector<char> in_component(graph.order(), 0);
  for (Vertex v : component) in_component[v] = 1;
  std::vector<Vertex> interior;
  VertexFunction boundary(graph.order());
  bool any_one = false;
  for (Vertex v : component) {
    if (out.ball.depth[v] == rho)
      boundary.set(v, 0.0);
    else
      interior.push_back(v);
  }
  for (Vertex x : component) {
    for (const auto& [y, w] : graph.neighbors(x)) {
      if (excluded[y]) {
        boundary.set(y, 1.0);
        any_one = true;
      }
    }
  }
  if (!any_one)
    throw DomainError("end has no omega boundary; barrier undefined (empty omega?)");

  if (interior.empty()) {
    // rho so small that nothing is unknown: the boundary rows are the answer
    out.values = boundary;
    return out;
  }
  const harm::HarmonicSolution sol = harm::dirichlet_solve(graph, interior, boundary, opts);
  out.values = sol.values;
  out.interior = sol.interior;
  out.residual = sol.residual;
  return out;
}

namespace {

struct Sentinels {
  std::vector<std::string> labels;
  std::vector<int> depths;
};

// smallest component vertex at each of three spec depths; duplicates collapse
Sentinels pick_sentinels(const gen::GraphGenerator& g, const End& end,
                         std::size_t vertex_budget) {
  const RootedBall ball = gen::materialize_ball(g, g.root(), end.probe_radius, vertex_budget);
  std::set<int> depths{end.probe_radius / 2, (3 * end.probe_radius) / 4, end.probe_radius - 1};
  depths.erase(0);

  std::set<std::string> in_component(end.component_labels.begin(), end.component_labels.end());
  Sentinels s;
  for (int d : depths) {
    for (Vertex v = 0; v < ball.graph.order(); ++v) {
      if (ball.depth[v] != d) continue;
      if (!in_component.count(ball.graph.label(v))) continue;
      s.labels.push_back(ball.graph.label(v));
      s.depths.push_back(d);
      break;  // vertices are depth-major and token-sorted, first hit is smallest
    }
  }
  if (s.labels.empty()) throw DomainError("end has no sentinel vertices inside the probe ball");
  return s;
}

}  // namespace

EndClassification classify_end(const gen::GraphGenerator& g, const End& end,
                               const std::vector<int>& rho_schedule, double margin,
                               double stall_eps, harm::SolveOptions opts) {
  EndClassification cls;
  cls.schedule = rho_schedule;
  cls.margin = margin;
  cls.stall_eps = stall_eps;
  for (std::size_t i = 1; i < rho_schedule.size(); ++i)
    if (rho_schedule[i] <= rho_schedule[i - 1])
      throw DomainError("rho schedule must be strictly increasing");

  if (rho_schedule.size() < 3) {
    cls.verdict = EndVerdict::Inconclusive;
    cls.reason = "schedule too short to judge a trend";
    return cls;
  }
  if (rho_schedule.front() < end.probe_radius + 1)
    throw DomainError("schedule must start past the probe radius");

  const Sentinels sent = pick_sentinels(g, end, opts.vertex_budget);
  for (std::size_t i = 0; i < sent.labels.size(); ++i)
    cls.sentinels.push_back({sent.labels[i], sent.depths[i], {}});

  for (int rho : rho_schedule) {
    const BarrierSolution b = barrier(g, end, rho, opts);
    for (SentinelTrace& t : cls.sentinels) {
      const auto idx = b.ball.graph.find(t.label);
      if (!idx || !b.values.defined(*idx))
        throw IntegrityError("sentinel '" + t.label + "' escaped the barrier domain");
      t.values.push_back(b.values.at(*idx));
    }
  }

  const std::size_t steps = rho_schedule.size();
  std::vector<double> increments(steps - 1, 0.0);
  for (const SentinelTrace& t : cls.sentinels) {
    for (std::size_t k = 1; k < steps; ++k) {
      const double d = t.values[k] - t.values[k - 1];
      if (d < -1e-8) cls.monotone = false;
      increments[k - 1] = std::max(increments[k - 1], d);
    }
    cls.limit_estimate = std::max(cls.limit_estimate, t.values.back());
  }
  cls.last_increment = increments.back();

  bool shrinking = true;
  for (std::size_t k = 1; k < increments.size(); ++k)
    shrinking = shrinking && (increments[k] <= increments[k - 1] + 1e-12);

  if (cls.last_increment < stall_eps && cls.limit_estimate <= 1.0 - margin) {
    cls.verdict = EndVerdict::NonParabolic;
    cls.reason = "trace stalled below 1 - margin";
  } else if (cls.limit_estimate >= 1.0 - margin - 1e-12 && shrinking) {
    cls.verdict = EndVerdict::Parabolic;
    cls.reason = "trace reached 1 - margin with shrinking increments";
  } else {
    cls.verdict = EndVerdict::Inconclusive;
    cls.reason = "trace neither stalled below the margin nor closed in on 1";
  }
  return cls;
}

EndCountResult count_ends(const gen::GraphGenerator& g,
                          const std::vector<std::vector<gen::GenVertex>>& omega_exhaustion,
                          int probe_radius, const std::vector<int>& rho_schedule, double margin,
                          double stall_eps, harm::SolveOptions opts) {
  for (std::size_t i = 1; i < omega_exhaustion.size(); ++i) {
    std::set<gen::GenVertex> prev(omega_exhaustion[i - 1].begin(), omega_exhaustion[i - 1].end());
    for (const auto& v : prev)
      if (!std::count(omega_exhaustion[i].begin(), omega_exhaustion[i].end(), v))
        throw DomainError("omega exhaustion is not increasing");
  }

  EndCountResult result;
  int last_count = 0;
  for (const auto& omega : omega_exhaustion) {
    const EndsResult er = ends_wrt(g, omega, probe_radius, opts.vertex_budget);
    EndCountStage stage;
    stage.stable = er.stable;
    for (const auto& v : omega) stage.omega_labels.push_back(v.to_string());
    stage.n_ends = static_cast<int>(er.ends.size());
    for (const End& e : er.ends) {
      const EndClassification cls = classify_end(g, e, rho_schedule, margin, stall_eps, opts);
      switch (cls.verdict) {
        case EndVerdict::Parabolic: ++stage.n_parabolic; break;
        case EndVerdict::NonParabolic: ++stage.n_nonparabolic; break;
        case EndVerdict::Inconclusive: ++stage.n_inconclusive; break;
      }
      stage.classifications.push_back(cls);
    }
    if (stage.n_ends < last_count) result.count_monotone = false;
    last_count = stage.n_ends;
    result.stages.push_back(std::move(stage));
  }
  return result;
}

SeparatingBasis separating_harmonics(const gen::GraphGenerator& g,
                                     const std::vector<gen::GenVertex>& omega, int probe_radius,
                                     int rho_green, int sentinel_depth,
                                     const std::vector<int>& classify_schedule,
                                     double classify_stall_eps, harm::SolveOptions opts) {
  SeparatingBasis basis;
  if (sentinel_depth < 0) sentinel_depth = std::max(1, probe_radius - 2);
  if (rho_green <= probe_radius)
    throw DomainError("rho_green must exceed the probe radius");

  basis.ball = gen::materialize_ball(g, g.root(), rho_green + 1, opts.vertex_budget);
  const WeightedGraph& graph = basis.ball.graph;

  if (omega.empty()) {
    basis.status = BasisStatus::ConstantsOnly;
    basis.note = "empty omega leaves a single end; constants span the basis";
    basis.functions.push_back(VertexFunction::constant(graph, 1.0));
    return basis;
  }

  const EndsResult er = ends_wrt(g, omega, probe_radius, opts.vertex_budget);

  std::vector<int> schedule = classify_schedule;
  if (schedule.empty())
    schedule = {probe_radius + 1, probe_radius + 5, probe_radius + 9,
                std::max(rho_green, probe_radius + 13)};

  std::vector<const End*> nonparabolic;
  for (const End& e : er.ends) {
    const EndClassification cls = classify_end(g, e, schedule, 0.05, classify_stall_eps, opts);
    if (cls.verdict == EndVerdict::NonParabolic) nonparabolic.push_back(&e);
  }

  if (nonparabolic.empty()) {
    basis.status = BasisStatus::Refused;
    basis.note = "no end classified non-parabolic; the construction degenerates to constants";
    return basis;
  }
  if (nonparabolic.size() == 1) {
    basis.status = BasisStatus::ConstantsOnly;
    basis.note = "one non-parabolic end; constants already realize the dimension";
    basis.end_representatives.push_back(nonparabolic.front()->representative.to_string());
    basis.functions.push_back(VertexFunction::constant(graph, 1.0));
    return basis;
  }

  // indicator supports: component of each end inside the big ball
  const auto omega_idx = omega_indices(graph, omega);
  std::vector<char> excluded(graph.order(), 0);
  for (Vertex v : omega_idx) excluded[v] = 1;
  std::vector<Vertex> rest;
  for (Vertex v = 0; v < graph.order(); ++v)
    if (!excluded[v]) rest.push_back(v);
  const auto comps = components_within(graph, rest);

  std::map<Vertex, VertexFunction> green_cache;
  auto green_at = [&](Vertex source) -> const VertexFunction& {
    auto it = green_cache.find(source);
    if (it == green_cache.end())
      it = green_cache.emplace(source,
                               harm::green_dirichlet(graph, basis.ball.root, rho_green, source,
                                                     opts))
               .first;
    return it->second;
  };

  for (const End* endp : nonparabolic) {
    const auto rep = graph.find(endp->representative.to_string());
    if (!rep) throw IntegrityError("end representative missing from the green ball");
    const std::vector<Vertex>* comp = nullptr;
    for (const auto& c : comps)
      if (std::binary_search(c.begin(), c.end(), *rep)) comp = &c;
    if (!comp) throw IntegrityError("end component missing from the green ball");

    // g_i = indicator of the closed component
    VertexFunction gi(graph.order());
    for (Vertex v = 0; v < graph.order(); ++v) gi.set(v, 0.0);
    for (Vertex v : closure(graph, *comp)) gi.set(v, 1.0);

    // Delta g_i has support near omega: endpoints of indicator transitions
    std::set<Vertex> support;
    for (const EdgeRef& e : graph.edges()) {
      if (gi.at(e.u) != gi.at(e.v)) {
        if (basis.ball.depth[e.u] <= rho_green) support.insert(e.u);
        if (basis.ball.depth[e.v] <= rho_green) support.insert(e.v);
      }
    }

    VertexFunction hi(graph.order());
    for (Vertex v = 0; v < graph.order(); ++v)
      if (basis.ball.depth[v] <= rho_green + 1) hi.set(v, gi.at(v));
    for (Vertex x : support) {
      const double coeff = laplacian(graph, gi, x) * graph.vertex_weight(x);
      if (coeff == 0.0) continue;
      const VertexFunction& green = green_at(x);
      for (Vertex v = 0; v < graph.order(); ++v)
        if (green.defined(v)) hi.set(v, hi.at(v) + coeff * green.at(v));
    }

    basis.end_representatives.push_back(endp->representative.to_string());
    basis.functions.push_back(std::move(hi));

    // deepest sentinel of this end inside the big ball
    std::set<std::string> comp_labels;
    for (Vertex v : *comp) comp_labels.insert(graph.label(v));
    std::string sentinel;
    for (Vertex v = 0; v < graph.order(); ++v) {
      if (basis.ball.depth[v] == sentinel_depth && comp_labels.count(graph.label(v))) {
        sentinel = graph.label(v);
        break;
      }
    }
    if (sentinel.empty())
      throw DomainError("no sentinel at the requested depth inside an end");
    basis.sentinel_labels.push_back(sentinel);
  }

  const std::size_t n = basis.functions.size();
  basis.gram.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vertex s = graph.index_of(basis.sentinel_labels[j]);
      basis.gram[i][j] = basis.functions[i].at(s);
      const double target = (i == j) ? 1.0 : 0.0;
      basis.max_identity_deviation =
          std::max(basis.max_identity_deviation, std::abs(basis.gram[i][j] - target));
    }
  }
  for (const VertexFunction& f : basis.functions) basis.sup_norms.push_back(f.max_abs());
  basis.status = BasisStatus::Ok;
  return basis;
}

}  // namespace curvgraph::ends

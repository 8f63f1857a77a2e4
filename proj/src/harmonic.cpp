#include "curvgraph/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curvgraph/errors.hpp"
#include "curvgraph/linalg.hpp"

namespace curvgraph::harm {

namespace {

// Shared Dirichlet-system core: the symmetric form matrix
//   L[x][x] = sum_{y~x} w(x,y),  L[x][y] = -w(x,y) for interior y,
// with rhs_x = sum_{boundary y~x} w(x,y) data(y) + extra(x).
// Delta u = 0 rows are recovered by dividing by m(x), so extra carries
// m(x) * (-Delta target), i.e. e_{x1} for the Green's function.
struct AssembledSystem {
  std::vector<Vertex> interior;          // sorted
  std::vector<int> pos;                  // graph vertex -> interior position or -1
  linalg::SparseSym matrix;
  std::vector<double> rhs;
};

AssembledSystem assemble(const WeightedGraph& g, const std::vector<Vertex>& interior_in,
                         const VertexFunction& boundary, const std::vector<double>* extra) {
  AssembledSystem s;
  s.interior = interior_in;
  std::sort(s.interior.begin(), s.interior.end());
  s.interior.erase(std::unique(s.interior.begin(), s.interior.end()), s.interior.end());

  s.pos.assign(g.order(), -1);
  for (std::size_t i = 0; i < s.interior.size(); ++i) {
    const Vertex v = s.interior[i];
    if (v < 0 || v >= g.order()) throw DomainError("interior vertex out of range");
    if (boundary.defined(v))
      throw DomainError("vertex '" + g.label(v) + "' is both interior and boundary");
    s.pos[v] = static_cast<int>(i);
  }

  const std::size_t k = s.interior.size();
  s.matrix.diag.assign(k, 0.0);
  s.matrix.off.assign(k, {});
  s.rhs.assign(k, 0.0);

  for (std::size_t i = 0; i < k; ++i) {
    const Vertex x = s.interior[i];
    for (const auto& [y, w] : g.neighbors(x)) {
      s.matrix.diag[i] += w;
      if (s.pos[y] >= 0) {
        s.matrix.off[i].emplace_back(s.pos[y], -w);
      } else if (boundary.defined(y)) {
        s.rhs[i] += w * boundary.at(y);
      } else {
        throw DomainError("neighbor '" + g.label(y) + "' of interior vertex '" + g.label(x) +
                          "' carries neither an unknown nor boundary data");
      }
    }
    if (extra) s.rhs[i] += (*extra)[i];
  }

  // every interior component must reach the boundary
  std::vector<char> contact(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex x = s.interior[i];
    for (const auto& [y, w] : g.neighbors(x))
      if (s.pos[y] < 0) contact[i] = 1;
  }
  std::vector<char> seen(k, 0);
  for (std::size_t start = 0; start < k; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> stack{start}, comp;
    seen[start] = 1;
    bool touches = false;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      comp.push_back(i);
      touches = touches || contact[i];
      for (const auto& [j, w] : s.matrix.off[i]) {
        if (!seen[j]) {
          seen[j] = 1;
          stack.push_back(static_cast<std::size_t>(j));
        }
      }
    }
    if (!touches)
      throw IllPosedError("interior component around '" +
                          g.label(s.interior[comp.front()]) + "' never meets the boundary");
  }
  return s;
}

struct CoreSolution {
  std::vector<double> x;
  int iterations = 0;
  std::string method;
};

CoreSolution solve_core(const AssembledSystem& s, const SolveOptions& opts) {
  const std::size_t k = s.interior.size();
  CoreSolution out;
  if (k == 0) {
    out.method = "empty";
    return out;
  }
  if (static_cast<int>(k) < opts.dense_threshold) {
    linalg::SymMatrix a(k);
    for (std::size_t i = 0; i < k; ++i) {
      a(i, i) = s.matrix.diag[i];
      for (const auto& [j, w] : s.matrix.off[i]) a(i, j) = w;
    }
    out.x = linalg::ldlt_solve(std::move(a), s.rhs);
    out.method = "dense-ldlt";
    return out;
  }
  const int cap = 200 + static_cast<int>(50.0 * std::sqrt(static_cast<double>(k)));
  const linalg::CgResult cg = linalg::conjugate_gradient(s.matrix, s.rhs, opts.cg_rel_tol, cap);
  if (!cg.converged)
    throw NumericError("conjugate gradient stalled at relative residual " +
                       std::to_string(cg.relative_residual));
  out.x = cg.x;
  out.iterations = cg.iterations;
  out.method = "cg-jacobi";
  return out;
}

}  // namespace

HarmonicSolution dirichlet_solve(const WeightedGraph& g, const std::vector<Vertex>& interior,
                                 const VertexFunction& boundary_values, SolveOptions opts) {
  const AssembledSystem s = assemble(g, interior, boundary_values, nullptr);
  const CoreSolution core = solve_core(s, opts);

  HarmonicSolution sol;
  sol.interior = s.interior;
  sol.boundary = boundary_values.domain();
  sol.iterations = core.iterations;
  sol.method = core.method;
  sol.values = VertexFunction(g.order());
  for (Vertex b : sol.boundary) sol.values.set(b, boundary_values.at(b));
  for (std::size_t i = 0; i < s.interior.size(); ++i) sol.values.set(s.interior[i], core.x[i]);

  for (Vertex x : s.interior)
    sol.residual = std::max(sol.residual, std::abs(laplacian(g, sol.values, x)));
  return sol;
}

VertexFunction green_dirichlet(const WeightedGraph& g, Vertex x0, int rho, Vertex x1,
                               SolveOptions opts) {
  if (rho < 0) throw DomainError("negative rho");
  const auto dist = distances_from(g, x0);
  if (dist[x1] < 0 || dist[x1] > rho)
    throw DomainError("source '" + g.label(x1) + "' lies outside B_rho(x0)");

  std::vector<Vertex> interior;
  VertexFunction boundary(g.order());
  for (Vertex v = 0; v < g.order(); ++v) {
    if (dist[v] >= 0 && dist[v] <= rho)
      interior.push_back(v);
    else if (dist[v] == rho + 1)
      boundary.set(v, 0.0);
  }

  std::vector<double> extra(interior.size(), 0.0);
  for (std::size_t i = 0; i < interior.size(); ++i)
    if (interior[i] == x1) extra[i] = 1.0;  // L u = e_{x1} encodes Delta u = -1_{x1}/m(x1)

  const AssembledSystem s = assemble(g, interior, boundary, &extra);
  const CoreSolution core = solve_core(s, opts);

  VertexFunction green(g.order());
  for (Vertex v : boundary.domain()) green.set(v, 0.0);
  double top = 0.0;
  for (std::size_t i = 0; i < s.interior.size(); ++i) {
    green.set(s.interior[i], core.x[i]);
    top = std::max(top, std::abs(core.x[i]));
  }
  for (std::size_t i = 0; i < s.interior.size(); ++i)
    if (core.x[i] < -1e-12 * (1.0 + top))
      throw NumericError("Green's function came out negative at '" +
                         g.label(s.interior[i]) + "'");
  return green;
}

GreenLimitResult green_limit(const gen::GraphGenerator& g, const gen::GenVertex& x1,
                             const std::vector<int>& rho_schedule, double stall_eps,
                             int window_radius, SolveOptions opts) {
  if (rho_schedule.empty()) throw DomainError("empty rho schedule");
  for (std::size_t i = 1; i < rho_schedule.size(); ++i)
    if (rho_schedule[i] <= rho_schedule[i - 1])
      throw DomainError("rho schedule must be strictly increasing");
  if (window_radius < 0) window_radius = rho_schedule.front();
  if (window_radius > rho_schedule.front())
    throw DomainError("window radius exceeds the smallest rho in the schedule");

  GreenLimitResult result;
  std::vector<double> prev;

  for (int rho : rho_schedule) {
    RootedBall ball;
    try {
      ball = gen::materialize_ball(g, g.root(), rho + 1, opts.vertex_budget);
    } catch (const ResourceError& e) {
      result.verdict = GreenVerdict::BudgetExceeded;
      result.note = e.what();
      return result;
    }
    const auto source = ball.graph.find(x1.to_string());
    if (!source || ball.depth[*source] > rho)
      throw DomainError("source " + x1.to_string() + " is outside B_rho of the root");

    const VertexFunction green = green_dirichlet(ball.graph, ball.root, rho, *source, opts);

    if (result.window_labels.empty()) {
      for (Vertex v = 0; v < ball.graph.order() && ball.depth[v] <= window_radius; ++v)
        result.window_labels.push_back(ball.graph.label(v));
    }
    GreenLimitRow row;
    row.rho = rho;
    row.window_values.reserve(result.window_labels.size());
    // layer-major ids make window vertices the same prefix in every ball
    for (std::size_t i = 0; i < result.window_labels.size(); ++i)
      row.window_values.push_back(green.at(static_cast<Vertex>(i)));
    if (!prev.empty()) {
      double inc = 0.0;
      for (std::size_t i = 0; i < prev.size(); ++i)
        inc = std::max(inc, std::abs(row.window_values[i] - prev[i]));
      row.increment = inc;
    }
    prev = row.window_values;
    result.rows.push_back(std::move(row));
  }

  if (result.rows.size() >= 2 && result.rows.back().increment < stall_eps)
    result.verdict = GreenVerdict::Converged;
  else
    result.verdict = GreenVerdict::Growing;
  return result;
}

GradientField gradient_field(const WeightedGraph& g, const VertexFunction& u) {
  GradientField f;
  f.vertex_gamma = VertexFunction(g.order());
  for (Vertex x = 0; x < g.order(); ++x) {
    if (!u.defined(x)) continue;
    bool ok = true;
    for (const auto& [y, w] : g.neighbors(x)) ok = ok && u.defined(y);
    if (!ok) continue;
    f.vertex_gamma.set(x, curv::gamma(g, u, x));
  }
  f.edge_gradient.reserve(g.edge_count());
  for (const EdgeRef& e : g.edges()) {
    if (u.defined(e.u) && u.defined(e.v))
      f.edge_gradient.push_back(std::abs(u.at(e.u) - u.at(e.v)));
    else
      f.edge_gradient.push_back(-1.0);
  }
  return f;
}

MaxGradientReport gradient_max_principle_check(const WeightedGraph& g,
                                               const std::vector<Vertex>& W,
                                               const VertexFunction& u, MaxGradientOptions opts) {
  MaxGradientReport rep;
  rep.eq_tol = opts.eq_tol;

  auto w_sorted = W;
  std::sort(w_sorted.begin(), w_sorted.end());
  w_sorted.erase(std::unique(w_sorted.begin(), w_sorted.end()), w_sorted.end());
  const auto delta_w = interior_boundary(g, w_sorted);
  std::vector<char> in_w(g.order(), 0), in_delta(g.order(), 0);
  for (Vertex v : w_sorted) in_w[v] = 1;
  for (Vertex v : delta_w) in_delta[v] = 1;

  // harmonicity on W minus its interior boundary, certified by residual
  const double scale = 1e-8 * (1.0 + u.max_abs());
  for (Vertex x : w_sorted) {
    if (in_delta[x]) continue;
    const double r = std::abs(laplacian(g, u, x));
    rep.harmonic_residual = std::max(rep.harmonic_residual, r);
  }
  if (rep.harmonic_residual > scale)
    throw DomainError("input is not harmonic on W \\ delta W (residual " +
                      std::to_string(rep.harmonic_residual) + ")");

  if (opts.verify_curvature) {
    for (const EdgeRef& e : g.edges()) {
      if (!in_w[e.u] || !in_w[e.v] || in_delta[e.u] || in_delta[e.v]) continue;
      const curv::OllivierResult r = curv::ollivier_curvature(g, e.u, e.v);
      if (r.kappa < -opts.curvature_tol)
        rep.curvature_violations.push_back(
            {"{" + g.label(e.u) + "," + g.label(e.v) + "}", r.kappa});
    }
    rep.curvature_ok = rep.curvature_violations.empty();
  }

  auto scan = [&](const std::vector<Vertex>& set) {
    EdgeId best;
    for (Vertex x : set) {
      for (const auto& [y, w] : g.neighbors(x)) {
        const double grad = std::abs(u.at(x) - u.at(y));
        if (grad > best.gradient) best = {x, y, grad};
      }
    }
    return best;
  };
  rep.max_over_set = scan(w_sorted);
  rep.max_over_boundary = scan(delta_w);
  rep.holds = (rep.max_over_set.gradient - rep.max_over_boundary.gradient) <= opts.eq_tol;
  return rep;
}

SubharmonicityReport subharmonicity_check(const WeightedGraph& g, const VertexFunction& u,
                                          const std::vector<Vertex>& region, double tol) {
  SubharmonicityReport rep;
  rep.tol = tol;

  const double scale = 1e-8 * (1.0 + u.max_abs());
  for (Vertex x : region)
    rep.harmonic_residual = std::max(rep.harmonic_residual, std::abs(laplacian(g, u, x)));
  if (rep.harmonic_residual > scale)
    throw DomainError("input is not harmonic on the region (residual " +
                      std::to_string(rep.harmonic_residual) + ")");

  VertexFunction gam(g.order());
  auto gamma_at = [&](Vertex z) {
    if (!gam.defined(z)) gam.set(z, curv::gamma(g, u, z));
    return gam.at(z);
  };

  for (Vertex x : region) {
    double acc = 0.0;
    const double gx = gamma_at(x);
    for (const auto& [y, w] : g.neighbors(x)) acc += w * (gamma_at(y) - gx);
    acc /= g.vertex_weight(x);
    SubharmonicityRow row;
    row.vertex = x;
    row.laplacian_of_gamma = acc;
    row.flagged = acc < -tol;
    rep.all_clear = rep.all_clear && !row.flagged;
    rep.rows.push_back(row);
  }
  return rep;
}

UniqueContinuationProbe unique_continuation_probe(const RootedBall& probe_ball, int R0,
                                                  const VertexFunction& u, double tol) {
  UniqueContinuationProbe res;
  res.tol = tol;
  const WeightedGraph& g = probe_ball.graph;

  for (Vertex v = 0; v < g.order(); ++v)
    if (probe_ball.depth[v] <= R0 + 1 && std::abs(u.at(v)) > tol)
      throw DomainError("probe function does not vanish on B_{R0+1}");

  const double scale = 1e-8 * (1.0 + u.max_abs());
  double residual = 0.0;
  for (Vertex v = 0; v < g.order(); ++v)
    if (probe_ball.depth[v] <= probe_ball.radius - 1)
      residual = std::max(residual, std::abs(laplacian(g, u, v)));
  if (residual > scale)
    throw DomainError("probe function is not harmonic on the probe ball");

  for (Vertex x = 0; x < g.order(); ++x) {
    if (probe_ball.depth[x] < R0) continue;
    for (const auto& [y, w] : g.neighbors(x)) {
      const double grad = std::abs(u.at(x) - u.at(y));
      res.max_annulus_gradient = std::max(res.max_annulus_gradient, grad);
      if (probe_ball.depth[x] == R0)
        res.max_inner_sphere_gradient = std::max(res.max_inner_sphere_gradient, grad);
    }
  }
  res.holds = (res.max_annulus_gradient - res.max_inner_sphere_gradient) <= tol;
  return res;
}

DimensionCertificate dimension_certificate(const gen::GraphGenerator& g,
                                           const gen::GenVertex& x0, int R0,
                                           curv::CurvatureMode mode, int probe_radius,
                                           double curvature_tol, std::size_t vertex_budget) {
  DimensionCertificate cert;
  cert.x0 = x0.to_string();
  cert.R0 = R0;
  cert.mode = mode;
  cert.probe_radius = probe_radius;

  // omega = B_R0(x0) as tokens, gathered by the same BFS the materializer runs
  std::vector<gen::GenVertex> omega;
  if (R0 >= 0) {
    std::set<gen::GenVertex> seen{x0};
    std::vector<gen::GenVertex> frontier{x0};
    omega.push_back(x0);
    for (int r = 0; r < R0; ++r) {
      std::vector<gen::GenVertex> next;
      for (const auto& u : frontier)
        for (const auto& [v, w] : g.neighbors(u))
          if (seen.insert(v).second) {
            next.push_back(v);
            omega.push_back(v);
          }
      frontier = std::move(next);
    }
  }

  cert.curvature = curv::curvature_outside(g, omega, mode, probe_radius, curvature_tol,
                                           vertex_budget);
  const RootedBall sphere_ball = gen::materialize_ball(g, x0, R0 + 1, vertex_budget);
  cert.sphere_count = 0;
  for (int d : sphere_ball.depth)
    if (d == R0 + 1) ++cert.sphere_count;
  cert.granted = cert.curvature.pass;
  return cert;
}

std::vector<DecayRow> gradient_decay_profile(const RootedBall& ball, const VertexFunction& u,
                                             const std::vector<int>& radii) {
  const WeightedGraph& g = ball.graph;
  int rmax = 0;
  for (int r : radii) {
    if (r < 0) throw DomainError("negative radius in decay profile");
    rmax = std::max(rmax, r);
  }
  if (rmax + 1 > ball.radius)
    throw DomainError("decay profile needs the ball to extend one layer past max(radii)");

  std::vector<DecayRow> rows;
  for (int r : radii) {
    DecayRow row;
    row.radius = r;
    for (Vertex x = 0; x < g.order(); ++x) {
      if (ball.depth[x] != r) continue;
      row.max_gamma = std::max(row.max_gamma, curv::gamma(g, u, x));
      for (const auto& [y, w] : g.neighbors(x))
        row.max_edge_gradient = std::max(row.max_edge_gradient, std::abs(u.at(x) - u.at(y)));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace curvgraph::harm
